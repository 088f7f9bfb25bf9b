#include "rankfeas/svd.hpp"

#include "rankfeas/errors.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace rankfeas {

namespace {

// Row index of the largest-magnitude entry; first index wins ties.
Eigen::Index dominant_row(const Eigen::Ref<const Eigen::VectorXd>& col) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < col.size(); ++i)
    if (std::abs(col(i)) > std::abs(col(best))) best = i;
  return best;
}

void canonicalize(SvdFactors& f) {
  const Eigen::Index r = f.min_dim();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return f.sigma(a) > f.sigma(b); });
  if (!std::is_sorted(order.begin(), order.end())) {
    SvdFactors sorted{f.u, f.sigma, f.v};
    for (Eigen::Index k = 0; k < r; ++k) {
      sorted.sigma(k) = f.sigma(order[k]);
      sorted.u.col(k) = f.u.col(order[k]);
      sorted.v.col(k) = f.v.col(order[k]);
    }
    f = std::move(sorted);
  }

  for (Eigen::Index j = 0; j < f.u.cols(); ++j) {
    if (f.u(dominant_row(f.u.col(j)), j) < 0.0) {
      f.u.col(j) *= -1.0;
      if (j < r) f.v.col(j) *= -1.0;
    }
  }
  for (Eigen::Index j = r; j < f.v.cols(); ++j) {
    if (f.v(dominant_row(f.v.col(j)), j) < 0.0) f.v.col(j) *= -1.0;
  }
}

}  // namespace

SvdFactors svd(const Matrix& x, const Tolerances& tol) {
  const Eigen::MatrixXd& a = x.eigen();
  Eigen::JacobiSVD<Eigen::MatrixXd> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("svd: Jacobi iteration did not converge", std::numeric_limits<double>::quiet_NaN());
  }
  SvdFactors f{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  canonicalize(f);

  const auto m = static_cast<double>(a.rows());
  const auto n = static_cast<double>(a.cols());
  const double u_orth =
      (f.u.transpose() * f.u - Eigen::MatrixXd::Identity(a.rows(), a.rows())).norm();
  const double v_orth =
      (f.v.transpose() * f.v - Eigen::MatrixXd::Identity(a.cols(), a.cols())).norm();
  if (u_orth > tol.orthogonality * m) throw NumericalError("svd: U not orthogonal", u_orth);
  if (v_orth > tol.orthogonality * n) throw NumericalError("svd: V not orthogonal", v_orth);

  const double sigma_max = f.sigma.size() > 0 ? f.sigma(0) : 0.0;
  const double recon = (reconstruct(f).eigen() - a).norm();
  if (recon > 1e-9 * (1.0 + sigma_max)) throw NumericalError("svd: reconstruction residual", recon);
  return f;
}

Matrix compose(const SvdFactors& f, const Eigen::VectorXd& sigma) {
  const Eigen::Index r = f.min_dim();
  if (sigma.size() != r) throw DimensionError("compose: sigma length must equal min(m, n)");
  Eigen::MatrixXd out = f.u.leftCols(r) * sigma.asDiagonal() * f.v.leftCols(r).transpose();
  return Matrix(std::move(out));
}

int numeric_rank(const SvdFactors& f, double tol) {
  if (f.min_dim() == 0) return 0;
  const double threshold = tol * std::max(1.0, f.sigma(0));
  int rank = 0;
  for (Eigen::Index j = 0; j < f.min_dim(); ++j)
    if (f.sigma(j) > threshold) ++rank;
  return rank;
}

int numeric_rank(const Matrix& x, double tol) {
  if (tol < 0.0) throw ParameterError("numeric_rank: tolerance must be nonnegative");
  return numeric_rank(svd(x), tol);
}

Eigen::MatrixXd row_space_basis(const SvdFactors& f, double rank_tol) {
  return f.v.leftCols(numeric_rank(f, rank_tol));
}

double largest_principal_cosine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  if (a.rows() != b.rows()) throw DimensionError("principal angles: ambient dimensions differ");
  const Eigen::MatrixXd cross = a.transpose() * b;
  Eigen::JacobiSVD<Eigen::MatrixXd> s(cross);
  return std::min(1.0, s.singularValues()(0));
}

}  // namespace rankfeas
