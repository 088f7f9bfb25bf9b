#pragma once

#include "rankfeas/algorithms.hpp"
#include "rankfeas/constraint_sets.hpp"
#include "rankfeas/rank_set.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rankfeas {

enum class AngleMethod { subspace_exact, sampled };

std::string to_string(AngleMethod m);

/// Threshold on c_bar below which an intersection is reported strongly regular.
inline constexpr double kStrongRegularityMargin = 1e-8;
/// Absolute slack allowed between a fitted rate and its prediction.
inline constexpr double kRateSlack = 0.05;

struct RegularityReport {
  double c_bar = 0.0;
  double angle_rad = 0.0;
  bool strongly_regular = true;
  AngleMethod method = AngleMethod::subspace_exact;
  std::string note;
};

struct RateReport {
  double empirical_rate = 0.0;
  double predicted_rate = std::numeric_limits<double>::quiet_NaN();
  int first_k = 0;
  int last_k = 0;
  double fit_residual = 0.0;
  bool compliant = false;
  std::vector<std::string> notes;
};

/// Cosine of the smallest principal angle between the proximal normal subspace of S
/// at `base` and the normal space span{A_i} of an affine M.
RegularityReport angle_constant(const Matrix& base, const RankSetSpec& spec,
                                const AffineConstraint& c);

/// Sampled lower bound on c_bar: for each seeded normal v of M, the best u in the
/// normal subspace of S is the normalized projection of v, giving ||P v|| / ||v||.
RegularityReport angle_constant_sampled(const Matrix& base, const RankSetSpec& spec,
                                        const MagnitudeConstraint& c, int n_samples,
                                        std::uint64_t seed = 0);
/// Same estimator with v drawn uniformly from the unit sphere of span{A_i}.
RegularityReport angle_constant_sampled(const Matrix& base, const RankSetSpec& spec,
                                        const AffineConstraint& c, int n_samples,
                                        std::uint64_t seed = 0);

/// True iff every nonzero supplied normal of M has a row space meeting the row
/// space of `base` (largest principal cosine >= 1 - subspace_tol).
bool strong_regularity_probe(const Matrix& base, const RankSetSpec& spec,
                             const std::vector<Matrix>& normals_m,
                             double subspace_tol = Tolerances{}.subspace);

/// Least-squares slope of log e_k over the last 60% of the usable iterations (at
/// least five), with e_k = ||x^k - target|| when a target is given and the step
/// norm otherwise. empirical_rate = exp(slope).
RateReport fit_linear_rate(const IterateTrace& trace, const std::optional<Matrix>& target = std::nullopt,
                           double predicted_rate = std::numeric_limits<double>::quiet_NaN());

}  // namespace rankfeas
