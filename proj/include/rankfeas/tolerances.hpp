#pragma once

namespace rankfeas {

/// Every numerical threshold used by the library, threaded by value.
struct Tolerances {
  /// Relative threshold for numeric rank: sigma_j counts when > rank * max(1, sigma_1).
  double rank = 1e-9;
  /// Relative band within which two singular values are treated as tied.
  double tie = 1e-8;
  /// Orthogonality residual allowed for SVD factors (scaled by dimension).
  double orthogonality = 1e-10;
  /// Largest principal-angle cosine regarded as "no intersection" is 1 - subspace.
  double subspace = 1e-6;
  /// Slack on the inexact-projection acceptance checks.
  double condition = 1e-9;
};

}  // namespace rankfeas
