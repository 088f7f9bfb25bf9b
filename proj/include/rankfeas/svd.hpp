#pragma once

#include "rankfeas/matrix.hpp"
#include "rankfeas/tolerances.hpp"

namespace rankfeas {

/// Full singular value decomposition x = U * diag_embed(sigma) * V^T.
///
/// U is m x m, V is n x n, sigma has r = min(m, n) entries in descending
/// order. Factors returned by svd() are canonical: for each column of U the
/// entry of largest magnitude (lowest row index on ties) is positive, the
/// matching column of V is flipped with it, and the complement columns of V
/// (when n > m) follow the same rule on V itself.
struct SvdFactors {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;

  Eigen::Index rows() const noexcept { return u.rows(); }
  Eigen::Index cols() const noexcept { return v.rows(); }
  Eigen::Index min_dim() const noexcept { return sigma.size(); }
};

/// Canonical full SVD. Throws NumericalError (carrying the offending residual)
/// when the computed factors miss the orthogonality or reconstruction bounds.
SvdFactors svd(const Matrix& x, const Tolerances& tol = {});

/// U * diag_embed(sigma) * V^T for arbitrary sigma of length min(m, n).
Matrix compose(const SvdFactors& f, const Eigen::VectorXd& sigma);
inline Matrix reconstruct(const SvdFactors& f) { return compose(f, f.sigma); }

/// Number of sigma_j > tol * max(1, sigma_1).
int numeric_rank(const SvdFactors& f, double tol);
int numeric_rank(const Matrix& x, double tol = Tolerances{}.rank);

/// Orthonormal basis (as columns) of the row space of x, i.e. range(x^T) = ker(x)^perp,
/// using the numerically nonzero singular values.
Eigen::MatrixXd row_space_basis(const SvdFactors& f, double rank_tol);

/// Largest singular value of a^T b for column-orthonormal a, b: the cosine of the
/// smallest principal angle between their ranges. Zero when either is empty.
double largest_principal_cosine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace rankfeas
