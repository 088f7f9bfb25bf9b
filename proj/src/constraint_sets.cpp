#include "rankfeas/constraint_sets.hpp"

#include "rankfeas/errors.hpp"
#include "rankfeas/random.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

namespace rankfeas {

namespace {

Eigen::MatrixXd stack_vectorized(const std::vector<Matrix>& maps) {
  Eigen::MatrixXd out(maps.front().size(), static_cast<Eigen::Index>(maps.size()));
  for (std::size_t i = 0; i < maps.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = maps[i].vec();
  return out;
}

}  // namespace

AffineConstraint::AffineConstraint(std::vector<Matrix> maps, Eigen::VectorXd rhs)
    : rows_(0), cols_(0), maps_(std::move(maps)), rhs_(std::move(rhs)) {
  if (maps_.empty()) throw ConfigError("affine constraint needs at least one measurement map");
  if (rhs_.size() != static_cast<Eigen::Index>(maps_.size())) {
    throw ConfigError("affine constraint: " + std::to_string(maps_.size()) + " maps but " +
                      std::to_string(rhs_.size()) + " right-hand sides");
  }
  if (!rhs_.allFinite()) throw ConfigError("affine constraint: non-finite right-hand side");
  rows_ = maps_.front().rows();
  cols_ = maps_.front().cols();
  for (const auto& a : maps_) {
    if (a.rows() != rows_ || a.cols() != cols_) throw ConfigError("affine constraint: maps differ in shape");
  }

  const Eigen::MatrixXd stacked = stack_vectorized(maps_);
  const Eigen::Index n = stacked.rows();
  basis_.resize(n, 0);
  for (Eigen::Index i = 0; i < stacked.cols(); ++i) {
    const Eigen::VectorXd a = stacked.col(i);
    Eigen::VectorXd w = a;
    for (int pass = 0; pass < 2; ++pass) w -= basis_ * (basis_.transpose() * w);
    const double norm = w.norm();
    if (norm > 1e-10 * a.norm() && norm > 0.0) {
      basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
      basis_.col(basis_.cols() - 1) = w / norm;
    }
  }

  // <A_i, x> = b_i  <=>  R^T (basis^T x) = b with R = basis^T A.
  const Eigen::MatrixXd coupling = (basis_.transpose() * stacked).transpose();
  offset_ = basis_.cols() > 0 ? Eigen::VectorXd(coupling.colPivHouseholderQr().solve(rhs_))
                              : Eigen::VectorXd(0);
  const double misfit = (coupling * offset_ - rhs_).norm();
  if (misfit > 1e-8 * rhs_.norm()) {
    throw ConfigError("affine constraint is inconsistent (least-squares residual " +
                      std::to_string(misfit) + ")");
  }
}

Matrix AffineConstraint::project(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("project_affine: shape mismatch");
  const Eigen::VectorXd u = x.vec();
  return Matrix::from_vec(u - basis_ * (basis_.transpose() * u - offset_), rows_, cols_);
}

double AffineConstraint::distance(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("affine distance: shape mismatch");
  return (basis_.transpose() * x.vec() - offset_).norm();
}

double AffineConstraint::residual(const Matrix& x) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < maps_.size(); ++i)
    worst = std::max(worst, std::abs(trace_inner(maps_[i], x) - rhs_(static_cast<Eigen::Index>(i))));
  return worst;
}

double AffineConstraint::normal_space_distance(const Matrix& z) const {
  return tangent_part(z.vec()).norm();
}

Eigen::VectorXd AffineConstraint::tangent_part(const Eigen::VectorXd& z) const {
  return z - basis_ * (basis_.transpose() * z);
}

MagnitudeConstraint::MagnitudeConstraint(Eigen::MatrixXd transform, Eigen::VectorXd moduli,
                                         Eigen::Index rows, Eigen::Index cols)
    : rows_(rows), cols_(cols), transform_(std::move(transform)), moduli_(std::move(moduli)) {
  const Eigen::Index n = rows * cols;
  if (rows < 1 || cols < 1) throw ConfigError("magnitude constraint: dimensions must be positive");
  if (transform_.rows() != n || transform_.cols() != n) {
    throw ConfigError("magnitude constraint: transform must be (m*n) x (m*n)");
  }
  if (moduli_.size() != n) throw ConfigError("magnitude constraint: need m*n moduli");
  if (!transform_.allFinite() || !moduli_.allFinite() || (moduli_.array() < 0.0).any()) {
    throw ConfigError("magnitude constraint: moduli must be finite and nonnegative");
  }
  const double orth = (transform_.transpose() * transform_ - Eigen::MatrixXd::Identity(n, n)).norm();
  if (orth > 1e-10 * static_cast<double>(n)) {
    throw ConfigError("magnitude constraint: transform is not orthogonal (residual " +
                      std::to_string(orth) + ")");
  }
}

Matrix MagnitudeConstraint::project(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("project_magnitude: shape mismatch");
  Eigen::VectorXd y = transform_ * x.vec();
  for (Eigen::Index j = 0; j < y.size(); ++j) y(j) = y(j) >= 0.0 ? moduli_(j) : -moduli_(j);
  return Matrix::from_vec(transform_.transpose() * y, rows_, cols_);
}

double MagnitudeConstraint::distance(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("magnitude distance: shape mismatch");
  return ((transform_ * x.vec()).cwiseAbs() - moduli_).norm();
}

double MagnitudeConstraint::residual(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("magnitude residual: shape mismatch");
  return ((transform_ * x.vec()).cwiseAbs() - moduli_).cwiseAbs().maxCoeff();
}

Matrix project_affine(const AffineConstraint& c, const Matrix& x) { return c.project(x); }

std::vector<Matrix> normal_space_affine(const AffineConstraint& c) {
  std::vector<Matrix> out;
  for (Eigen::Index k = 0; k < c.basis().cols(); ++k)
    out.push_back(Matrix::from_vec(c.basis().col(k), c.rows(), c.cols()));
  return out;
}

Matrix project_magnitude(const MagnitudeConstraint& c, const Matrix& x) { return c.project(x); }

Matrix normal_cone_magnitude_sample(const MagnitudeConstraint& c, const Matrix& base,
                                    std::uint64_t seed) {
  if (base.rows() != c.rows() || base.cols() != c.cols()) {
    throw DimensionError("normal_cone_magnitude_sample: shape mismatch");
  }
  if (c.residual(base) > 1e-8) throw PreconditionError("normal_cone_magnitude_sample: base not in M");
  Rng rng = make_rng(seed, 0x6d61676e);
  const Eigen::VectorXd y = c.transform() * base.vec();
  Eigen::VectorXd t(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) t(j) = y(j) * uniform(0.05, 1.0, rng);
  const Matrix offset = Matrix::from_vec(c.transform().transpose() * t, c.rows(), c.cols());
  const double err = distance(c.project(base + offset), base);
  if (err > 1e-9 * (1.0 + fro_norm(base))) {
    throw NumericalError("magnitude proximal normal failed projection round-trip", err);
  }
  return uniform(0.5, 2.0, rng) * offset;
}

Matrix project(const Constraint& c, const Matrix& x) {
  return std::visit([&](const auto& set) { return set.project(x); }, c);
}

double distance_to(const Constraint& c, const Matrix& x) {
  return std::visit([&](const auto& set) { return set.distance(x); }, c);
}

double residual(const Constraint& c, const Matrix& x) {
  return std::visit([&](const auto& set) { return set.residual(x); }, c);
}

Eigen::Index constraint_rows(const Constraint& c) {
  return std::visit([](const auto& set) { return set.rows(); }, c);
}

Eigen::Index constraint_cols(const Constraint& c) {
  return std::visit([](const auto& set) { return set.cols(); }, c);
}

std::string kind_name(const Constraint& c) {
  return std::holds_alternative<AffineConstraint>(c) ? "affine" : "magnitude";
}

namespace {

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v(i) << '\n';
}

void expect(std::istream& in, const std::string& keyword) {
  std::string token;
  if (!(in >> token) || token != keyword) {
    throw ConfigError("constraint text: expected '" + keyword + "', got '" + token + "'");
  }
}

long long read_count(std::istream& in, const char* what) {
  long long v = 0;
  if (!(in >> v) || v < 0) throw ConfigError(std::string("constraint text: bad ") + what);
  return v;
}

Eigen::VectorXd read_vector(std::istream& in, long long n) {
  Eigen::VectorXd v(n);
  for (long long i = 0; i < n; ++i) {
    std::string token;
    if (!(in >> token)) throw ConfigError("constraint text: vector too short");
    std::size_t used = 0;
    try {
      v(i) = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ConfigError("constraint text: bad number '" + token + "'");
  }
  return v;
}

}  // namespace

void write_constraint(std::ostream& out, const Constraint& c) {
  const auto old_precision = out.precision(17);
  out << "constraint " << kind_name(c) << '\n';
  out << "dims " << constraint_rows(c) << ' ' << constraint_cols(c) << '\n';
  if (const auto* a = std::get_if<AffineConstraint>(&c)) {
    out << "maps " << a->maps().size() << '\n';
    for (const auto& m : a->maps()) write_matrix(out, m);
    out << "rhs " << a->rhs().size() << '\n';
    write_vector(out, a->rhs());
  } else {
    const auto& g = std::get<MagnitudeConstraint>(c);
    out << "transform\n";
    write_matrix(out, Matrix(g.transform()));
    out << "moduli " << g.moduli().size() << '\n';
    write_vector(out, g.moduli());
  }
  out.precision(old_precision);
}

Constraint read_constraint(std::istream& in) {
  expect(in, "constraint");
  std::string kind;
  in >> kind;
  expect(in, "dims");
  const long long m = read_count(in, "dims");
  const long long n = read_count(in, "dims");
  if (kind == "affine") {
    expect(in, "maps");
    const long long p = read_count(in, "map count");
    std::vector<Matrix> maps;
    for (long long i = 0; i < p; ++i) {
      maps.push_back(read_matrix(in));
      if (maps.back().rows() != m || maps.back().cols() != n) {
        throw ConfigError("constraint text: map shape disagrees with dims");
      }
    }
    expect(in, "rhs");
    const long long q = read_count(in, "rhs count");
    return AffineConstraint(std::move(maps), read_vector(in, q));
  }
  if (kind == "magnitude") {
    expect(in, "transform");
    const Matrix q = read_matrix(in);
    expect(in, "moduli");
    const long long count = read_count(in, "moduli count");
    return MagnitudeConstraint(q.eigen(), read_vector(in, count), m, n);
  }
  throw ConfigError("constraint text: unknown kind '" + kind + "'");
}

void save_constraint(const std::string& path, const Constraint& c) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_constraint(out, c);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Constraint load_constraint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_constraint(in);
}

}  // namespace rankfeas
