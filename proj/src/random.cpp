#include "rankfeas/random.hpp"

#include "rankfeas/errors.hpp"

namespace rankfeas {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd out(rows, cols);
  // Fill row by row so the draw order matches the row-major text format.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = normal(rng);
  return out;
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return Matrix(gaussian(rows, cols, rng));
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, Rng& rng) {
  const Eigen::MatrixXd g = gaussian(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Matrix random_unit_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd g = gaussian(rows, cols, rng);
  g /= g.norm();
  return Matrix(std::move(g));
}

Matrix planted_matrix(Eigen::Index rows, Eigen::Index cols, const Eigen::VectorXd& sigma, Rng& rng) {
  const Eigen::Index r = std::min(rows, cols);
  if (sigma.size() > r) throw DimensionError("planted_matrix: more singular values than min(m, n)");
  const Eigen::MatrixXd u = random_orthogonal(rows, rng);
  const Eigen::MatrixXd v = random_orthogonal(cols, rng);
  const Eigen::Index k = sigma.size();
  return Matrix(Eigen::MatrixXd(u.leftCols(k) * sigma.asDiagonal() * v.leftCols(k).transpose()));
}

double uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace rankfeas
