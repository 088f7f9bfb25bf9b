#pragma once

#include "rankfeas/matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace rankfeas {

/// M = {x : <A_i, x> = b_i, i = 1..p}.
///
/// The span of the measurement maps is orthonormalized once at construction
/// (Gram-Schmidt with one reorthogonalization pass), after which projecting is
/// O(p * m * n). Construction fails with ConfigError if the system has no
/// solution.
class AffineConstraint {
 public:
  AffineConstraint(std::vector<Matrix> maps, Eigen::VectorXd rhs);

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }
  const std::vector<Matrix>& maps() const noexcept { return maps_; }
  const Eigen::VectorXd& rhs() const noexcept { return rhs_; }

  /// Columns are the vectorized (row-major) orthonormal basis of span{A_i}.
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

  Matrix project(const Matrix& x) const;
  /// Euclidean distance from x to M.
  double distance(const Matrix& x) const;
  /// max_i |<A_i, x> - b_i|.
  double residual(const Matrix& x) const;
  /// Component of z orthogonal to span{A_i}, i.e. the distance of z to the normal space.
  double normal_space_distance(const Matrix& z) const;
  /// Projection of z onto the null space of the measurement operator.
  Eigen::VectorXd tangent_part(const Eigen::VectorXd& z) const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<Matrix> maps_;
  Eigen::VectorXd rhs_;
  Eigen::MatrixXd basis_;
  Eigen::VectorXd offset_;  // basis^T x for every feasible x
};

/// Real analog of a Fourier magnitude set: M = {x : |(Q vec(x))_j| = b_j} for an
/// orthogonal N x N transform Q, N = m * n, and target moduli b_j >= 0.
class MagnitudeConstraint {
 public:
  MagnitudeConstraint(Eigen::MatrixXd transform, Eigen::VectorXd moduli, Eigen::Index rows,
                      Eigen::Index cols);

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }
  const Eigen::MatrixXd& transform() const noexcept { return transform_; }
  const Eigen::VectorXd& moduli() const noexcept { return moduli_; }

  /// Sign-preserving rescale in the transformed frame; zero coordinates map to +b_j.
  Matrix project(const Matrix& x) const;
  double distance(const Matrix& x) const;
  /// max_j ||(Q vec x)_j| - b_j|.
  double residual(const Matrix& x) const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  Eigen::MatrixXd transform_;
  Eigen::VectorXd moduli_;
};

using Constraint = std::variant<AffineConstraint, MagnitudeConstraint>;

Matrix project_affine(const AffineConstraint& c, const Matrix& x);
/// Trace-orthonormal basis of span{A_i}, the normal space of M at every point.
std::vector<Matrix> normal_space_affine(const AffineConstraint& c);

Matrix project_magnitude(const MagnitudeConstraint& c, const Matrix& x);
/// Seeded proximal normal lambda * (x - base) where x scales each transformed
/// coordinate of base outward by a factor in (1, 2); certified by projecting x back.
Matrix normal_cone_magnitude_sample(const MagnitudeConstraint& c, const Matrix& base,
                                    std::uint64_t seed);

Matrix project(const Constraint& c, const Matrix& x);
double distance_to(const Constraint& c, const Matrix& x);
double residual(const Constraint& c, const Matrix& x);
Eigen::Index constraint_rows(const Constraint& c);
Eigen::Index constraint_cols(const Constraint& c);
std::string kind_name(const Constraint& c);

// Text document: a "constraint <kind>" line, "dims m n", then either
// "maps p" + p matrices + "rhs p" + values, or "transform" + matrix +
// "moduli N" + values. Reals use 17 significant digits.
void write_constraint(std::ostream& out, const Constraint& c);
Constraint read_constraint(std::istream& in);
void save_constraint(const std::string& path, const Constraint& c);
Constraint load_constraint(const std::string& path);

}  // namespace rankfeas
