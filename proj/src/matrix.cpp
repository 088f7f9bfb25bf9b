#include "rankfeas/matrix.hpp"

#include "rankfeas/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace rankfeas {

namespace {

void check_invariants(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DimensionError("matrix dimensions must be positive, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw NumericalError("matrix has non-finite entries");
}

}  // namespace

Matrix::Matrix(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("matrix dimensions must be positive, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  data_ = Eigen::MatrixXd::Zero(rows, cols);
}

Matrix::Matrix(Eigen::MatrixXd data) : data_(std::move(data)) { check_invariants(data_); }

Matrix Matrix::identity(Eigen::Index n) {
  Matrix out(n, n);
  out.data_.setIdentity();
  return out;
}

Matrix Matrix::diagonal(Eigen::Index rows, Eigen::Index cols, std::span<const double> diag) {
  Matrix out(rows, cols);
  const auto k = std::min<Eigen::Index>({rows, cols, static_cast<Eigen::Index>(diag.size())});
  for (Eigen::Index i = 0; i < k; ++i) out.data_(i, i) = diag[i];
  check_invariants(out.data_);
  return out;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  return diagonal(n, n, std::span<const double>(diag.begin(), diag.size()));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = m > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
  Matrix out(m, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) throw DimensionError("ragged row list");
    Eigen::Index j = 0;
    for (double v : row) out.data_(i, j++) = v;
    ++i;
  }
  check_invariants(out.data_);
  return out;
}

Matrix Matrix::from_row_major(Eigen::Index rows, Eigen::Index cols,
                              std::span<const double> entries) {
  Matrix out(rows, cols);
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols) {
    throw DimensionError("expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(entries.size()));
  }
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out.data_(i, j) = entries[i * cols + j];
  check_invariants(out.data_);
  return out;
}

Matrix Matrix::from_vec(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return from_row_major(rows, cols, std::span<const double>(v.data(), v.size()));
}

Eigen::VectorXd Matrix::vec() const {
  Eigen::VectorXd out(size());
  for (Eigen::Index i = 0; i < rows(); ++i)
    for (Eigen::Index j = 0; j < cols(); ++j) out(i * cols() + j) = data_(i, j);
  return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "matrix addition");
  data_ += rhs.data_;
  if (!data_.allFinite()) throw NumericalError("matrix addition produced non-finite entries");
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "matrix subtraction");
  data_ -= rhs.data_;
  if (!data_.allFinite()) throw NumericalError("matrix subtraction produced non-finite entries");
  return *this;
}

Matrix& Matrix::operator*=(double scale) {
  data_ *= scale;
  if (!data_.allFinite()) throw NumericalError("matrix scaling produced non-finite entries");
  return *this;
}

void require_same_shape(const Matrix& x, const Matrix& y, const char* context) {
  if (!x.same_shape(y)) {
    std::ostringstream msg;
    msg << context << ": incompatible shapes " << x.rows() << "x" << x.cols() << " and "
        << y.rows() << "x" << y.cols();
    throw DimensionError(msg.str());
  }
}

double trace_inner(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y, "trace_inner");
  return x.eigen().cwiseProduct(y.eigen()).sum();
}

double fro_norm(const Matrix& x) { return x.eigen().norm(); }

double distance(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y, "distance");
  return (x.eigen() - y.eigen()).norm();
}

void write_matrix(std::ostream& out, const Matrix& x) {
  const auto old_precision = out.precision(17);
  out << x.rows() << ' ' << x.cols() << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j > 0) out << ' ';
      out << x(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

Matrix read_matrix(std::istream& in) {
  long long m = 0;
  long long n = 0;
  if (!(in >> m >> n)) throw ConfigError("matrix text: missing 'm n' header");
  if (m < 1 || n < 1) throw ConfigError("matrix text: dimensions must be positive");
  std::vector<double> entries(static_cast<std::size_t>(m * n));
  for (auto& e : entries) {
    std::string token;
    if (!(in >> token)) throw ConfigError("matrix text: expected " + std::to_string(m * n) + " entries");
    std::size_t used = 0;
    try {
      e = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ConfigError("matrix text: bad number '" + token + "'");
  }
  try {
    return Matrix::from_row_major(m, n, entries);
  } catch (const NumericalError&) {
    throw ConfigError("matrix text: non-finite entry");
  }
}

std::string to_text(const Matrix& x) {
  std::ostringstream out;
  write_matrix(out, x);
  return out.str();
}

Matrix matrix_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

void save_matrix(const std::string& path, const Matrix& x) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix(out, x);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_matrix(in);
}

}  // namespace rankfeas
