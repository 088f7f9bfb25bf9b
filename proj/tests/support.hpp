#pragma once

#include "rankfeas/matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace testing_support {

inline Eigen::MatrixXd seeded_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed * 2654435761ULL + 17);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(gen);
  return m;
}

// Orthogonal factor of a seeded Gaussian matrix via modified Gram-Schmidt,
// kept separate from the library's Householder sampler.
inline Eigen::MatrixXd seeded_orthogonal(Eigen::Index n, std::uint64_t seed) {
  Eigen::MatrixXd q = seeded_gaussian(n, n, seed);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    q.col(j).normalize();
  }
  return q;
}

inline rankfeas::Matrix planted(Eigen::Index rows, Eigen::Index cols, const Eigen::VectorXd& sigma,
                                std::uint64_t seed) {
  const Eigen::MatrixXd u = seeded_orthogonal(rows, seed);
  const Eigen::MatrixXd v = seeded_orthogonal(cols, seed + 7777);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) d(i, i) = sigma(i);
  return rankfeas::Matrix(Eigen::MatrixXd(u * d * v.transpose()));
}

inline double max_abs_diff(const rankfeas::Matrix& a, const rankfeas::Matrix& b) {
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

}  // namespace testing_support
