#pragma once

#include "rankfeas/matrix.hpp"

#include <cstdint>
#include <random>

namespace rankfeas {

using Rng = std::mt19937_64;

/// Generator seeded from (seed, stream) so that independent uses of one seed
/// draw from unrelated sequences.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// i.i.d. standard normal entries.
Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed orthogonal n x n matrix (QR of a Gaussian with sign fix).
Eigen::MatrixXd random_orthogonal(Eigen::Index n, Rng& rng);

/// Gaussian matrix scaled to unit Frobenius norm.
Matrix random_unit_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// U0 * diag_embed(sigma) * V0^T with Haar-random U0, V0.
Matrix planted_matrix(Eigen::Index rows, Eigen::Index cols, const Eigen::VectorXd& sigma, Rng& rng);

double uniform(double lo, double hi, Rng& rng);

}  // namespace rankfeas
