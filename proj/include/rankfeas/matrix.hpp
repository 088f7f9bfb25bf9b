#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>

namespace rankfeas {

/// Dense real m x n matrix with m, n >= 1 and finite entries.
///
/// A thin value wrapper over Eigen::MatrixXd. Every constructor validates the
/// shape and finiteness invariants, so a Matrix that exists is always usable
/// as a point of the ambient space R^{m x n}. Numerical kernels work on the
/// underlying Eigen object through eigen().
class Matrix {
 public:
  /// Zero matrix of the given shape.
  Matrix(Eigen::Index rows, Eigen::Index cols);
  explicit Matrix(Eigen::MatrixXd data);

  static Matrix zeros(Eigen::Index rows, Eigen::Index cols) { return {rows, cols}; }
  static Matrix identity(Eigen::Index n);
  /// m x n matrix with `diag` on the main diagonal (shorter diagonals are zero padded).
  static Matrix diagonal(Eigen::Index rows, Eigen::Index cols, std::span<const double> diag);
  static Matrix diagonal(std::initializer_list<double> diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_row_major(Eigen::Index rows, Eigen::Index cols, std::span<const double> entries);
  /// Inverse of vec(): entries of `v` are taken in row-major order.
  static Matrix from_vec(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols);

  Eigen::Index rows() const noexcept { return data_.rows(); }
  Eigen::Index cols() const noexcept { return data_.cols(); }
  Eigen::Index size() const noexcept { return data_.size(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  const Eigen::MatrixXd& eigen() const noexcept { return data_; }

  /// Row-major vectorization, length m*n.
  Eigen::VectorXd vec() const;

  Matrix transpose() const { return Matrix(Eigen::MatrixXd(data_.transpose())); }
  bool same_shape(const Matrix& other) const noexcept {
    return rows() == other.rows() && cols() == other.cols();
  }

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double scale);

  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(Matrix lhs, double scale) { return lhs *= scale; }
  friend Matrix operator*(double scale, Matrix rhs) { return rhs *= scale; }
  friend Matrix operator-(Matrix m) { return m *= -1.0; }

  /// Exact entrywise equality.
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.same_shape(b) && a.data_ == b.data_;
  }

 private:
  Eigen::MatrixXd data_;
};

/// trace(y^T x) = sum_ij x_ij * y_ij.
double trace_inner(const Matrix& x, const Matrix& y);

/// Frobenius norm sqrt(trace(x^T x)).
double fro_norm(const Matrix& x);

/// ||x - y||_F, shapes must agree.
double distance(const Matrix& x, const Matrix& y);

/// Throws DimensionError unless x and y have the same shape.
void require_same_shape(const Matrix& x, const Matrix& y, const char* context);

// Text format: a header line "m n" followed by m lines of n reals printed
// with 17 significant digits, which round-trips every double exactly.
void write_matrix(std::ostream& out, const Matrix& x);
Matrix read_matrix(std::istream& in);
std::string to_text(const Matrix& x);
Matrix matrix_from_text(const std::string& text);
void save_matrix(const std::string& path, const Matrix& x);
Matrix load_matrix(const std::string& path);

}  // namespace rankfeas
