#include "rankfeas/rank_set.hpp"

#include "rankfeas/errors.hpp"
#include "rankfeas/random.hpp"

#include <algorithm>
#include <string>

namespace rankfeas {

double ExtendedReal::value() const {
  if (!value_) throw ParameterError("extended real is +infinity");
  return *value_;
}

void RankSetSpec::validate(Eigen::Index rows, Eigen::Index cols) const {
  const auto r = std::min(rows, cols);
  if (s < 0 || s > r) {
    throw ParameterError("rank bound s = " + std::to_string(s) + " outside [0, " +
                         std::to_string(r) + "]");
  }
  if (tie_tol < 0.0 || rank_tol < 0.0) throw ParameterError("rank-set tolerances must be nonnegative");
}

namespace {

double sigma_scale(const SvdFactors& f) { return std::max(1.0, f.min_dim() > 0 ? f.sigma(0) : 0.0); }

void check_s(const SvdFactors& f, int s) {
  if (s < 0 || s > f.min_dim()) {
    throw ParameterError("rank bound s = " + std::to_string(s) + " outside [0, " +
                         std::to_string(f.min_dim()) + "]");
  }
}

void require_rank_exactly(const SvdFactors& f, const RankSetSpec& spec, const char* op) {
  const int rank = numeric_rank(f, spec.rank_tol);
  if (rank != spec.s) {
    throw PreconditionError(std::string(op) + ": base point has rank " + std::to_string(rank) +
                            ", expected exactly s = " + std::to_string(spec.s));
  }
}

// Orthonormal complements of the leading s left/right singular vectors.
Eigen::MatrixXd left_complement(const SvdFactors& f, int s) { return f.u.rightCols(f.u.cols() - s); }
Eigen::MatrixXd right_complement(const SvdFactors& f, int s) { return f.v.rightCols(f.v.cols() - s); }

}  // namespace

Matrix sigma_truncate(const SvdFactors& f, int s) {
  check_s(f, s);
  Eigen::VectorXd kept = f.sigma;
  kept.tail(f.min_dim() - s).setZero();
  return compose(f, kept);
}

std::vector<int> j_set(const SvdFactors& f, const ExtendedReal& alpha, double tie_tol) {
  std::vector<int> out;
  if (alpha.is_infinite()) return out;
  const double threshold = alpha.value() - tie_tol * sigma_scale(f);
  for (Eigen::Index j = 0; j < f.min_dim(); ++j)
    if (f.sigma(j) >= threshold) out.push_back(static_cast<int>(j));
  return out;
}

std::vector<int> j_set(const Matrix& x, const ExtendedReal& alpha, double tie_tol) {
  if (!alpha.is_infinite() && alpha.value() < 0.0) throw ParameterError("j_set: alpha must be >= 0");
  return j_set(svd(x), alpha, tie_tol);
}

ExtendedReal alpha_s(const SvdFactors& f, int s, double rank_tol) {
  check_s(f, s);
  if (s == 0) return ExtendedReal::infinity();
  if (numeric_rank(f, rank_tol) < s) return ExtendedReal(0.0);
  return ExtendedReal(f.sigma(s - 1));
}

ExtendedReal alpha_s(const Matrix& x, int s, double rank_tol) { return alpha_s(svd(x), s, rank_tol); }

ProjectionResult project_rank(const Matrix& x, const SvdFactors& f, const RankSetSpec& spec) {
  spec.validate(x.rows(), x.cols());
  ProjectionResult out{sigma_truncate(f, spec.s)};
  out.distance = f.sigma.tail(f.min_dim() - spec.s).norm();
  out.alpha_s = alpha_s(f, spec.s, spec.rank_tol);
  out.j_count = static_cast<int>(j_set(f, out.alpha_s, spec.tie_tol).size());
  // When alpha_s = 0 the point already lies in S and the surplus of J consists of
  // zero singular values, which the truncation leaves untouched.
  out.multivalued = out.j_count > spec.s && !out.alpha_s.is_infinite() && out.alpha_s.value() > 0.0;
  return out;
}

ProjectionResult project_rank(const Matrix& x, const RankSetSpec& spec) {
  spec.validate(x.rows(), x.cols());
  return project_rank(x, svd(x), spec);
}

std::vector<Matrix> enumerate_projection_representatives(const Matrix& x, const RankSetSpec& spec,
                                                         int limit) {
  if (limit < 1) throw ParameterError("enumerate_projection_representatives: limit must be >= 1");
  spec.validate(x.rows(), x.cols());
  const SvdFactors f = svd(x);
  ProjectionResult p = project_rank(x, f, spec);
  std::vector<Matrix> out;
  out.push_back(p.point);
  if (!p.multivalued) return out;

  // Indices strictly above the tie band are always kept; the rest of J(x, alpha_s)
  // is the tied group from which the remaining slots are filled.
  const double alpha = p.alpha_s.value();
  const double band = spec.tie_tol * sigma_scale(f);
  std::vector<int> kept;
  std::vector<int> tied;
  for (int j : j_set(f, p.alpha_s, spec.tie_tol)) (f.sigma(j) > alpha + band ? kept : tied).push_back(j);
  const int slots = spec.s - static_cast<int>(kept.size());

  // Lexicographic walk over slot-subsets of the tied group; the first subset is
  // the canonical representative already in `out`.
  std::vector<int> pick(static_cast<std::size_t>(slots));
  for (int k = 0; k < slots; ++k) pick[k] = k;
  const int g = static_cast<int>(tied.size());
  auto advance = [&]() {
    int k = slots - 1;
    while (k >= 0 && pick[k] == g - slots + k) --k;
    if (k < 0) return false;
    ++pick[k];
    for (int t = k + 1; t < slots; ++t) pick[t] = pick[t - 1] + 1;
    return true;
  };
  while (static_cast<int>(out.size()) < limit && advance()) {
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(f.min_dim());
    for (int j : kept) sigma(j) = f.sigma(j);
    for (int k : pick) sigma(tied[k]) = f.sigma(tied[k]);
    out.push_back(compose(f, sigma));
  }
  return out;
}

bool stated_normal_cone_member(const NormalConeQuery& q, const RankSetSpec& spec) {
  require_same_shape(q.base, q.vector, "stated_normal_cone_member");
  spec.validate(q.base.rows(), q.base.cols());
  const SvdFactors fb = svd(q.base);
  if (numeric_rank(fb, spec.rank_tol) > spec.s) {
    throw PreconditionError("stated_normal_cone_member: base point is not in S");
  }
  const SvdFactors fv = svd(q.vector);
  const int r = static_cast<int>(fb.min_dim());
  if (numeric_rank(fv, spec.rank_tol) > r - spec.s) return false;
  const double cosine =
      largest_principal_cosine(row_space_basis(fv, spec.rank_tol), row_space_basis(fb, spec.rank_tol));
  return cosine < 1.0 - q.subspace_tol;
}

std::vector<Matrix> normal_subspace_basis(const Matrix& base, const RankSetSpec& spec) {
  spec.validate(base.rows(), base.cols());
  const SvdFactors f = svd(base);
  require_rank_exactly(f, spec, "normal_subspace_basis");
  const Eigen::MatrixXd ul = left_complement(f, spec.s);
  const Eigen::MatrixXd vr = right_complement(f, spec.s);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(ul.cols() * vr.cols()));
  for (Eigen::Index i = 0; i < ul.cols(); ++i)
    for (Eigen::Index j = 0; j < vr.cols(); ++j)
      out.emplace_back(Eigen::MatrixXd(ul.col(i) * vr.col(j).transpose()));
  return out;
}

namespace {

Matrix proximal_normal_impl(const Matrix& base, const SvdFactors& f, const RankSetSpec& spec,
                            const Eigen::MatrixXd& block, double lambda) {
  const Eigen::MatrixXd ul = left_complement(f, spec.s);
  const Eigen::MatrixXd vr = right_complement(f, spec.s);
  if (block.rows() != ul.cols() || block.cols() != vr.cols()) {
    throw DimensionError("proximal normal block must be (m-s) x (n-s)");
  }
  if (lambda < 0.0) throw ParameterError("proximal normal scale must be nonnegative");
  if (spec.s > 0 && block.size() > 0) {
    const double gap = f.sigma(spec.s - 1);
    const double spectral = Eigen::JacobiSVD<Eigen::MatrixXd>(block).singularValues()(0);
    if (!(spectral < gap / 2.0)) {
      throw ParameterError("proximal normal block too large: ||W||_2 must be < sigma_s / 2");
    }
  }
  const Matrix offset(Eigen::MatrixXd(ul * block * vr.transpose()));
  const Matrix x = base + offset;
  const ProjectionResult back = project_rank(x, spec);
  const double err = distance(back.point, base);
  if (err > 1e-9 * (1.0 + fro_norm(base))) {
    throw NumericalError("proximal normal failed projection round-trip", err);
  }
  return lambda * offset;
}

}  // namespace

Matrix proximal_normal_from_block(const Matrix& base, const RankSetSpec& spec,
                                  const Eigen::MatrixXd& block, double lambda) {
  spec.validate(base.rows(), base.cols());
  const SvdFactors f = svd(base);
  require_rank_exactly(f, spec, "proximal_normal_from_block");
  return proximal_normal_impl(base, f, spec, block, lambda);
}

Matrix sample_proximal_normal(const Matrix& base, const RankSetSpec& spec, std::uint64_t seed) {
  spec.validate(base.rows(), base.cols());
  const SvdFactors f = svd(base);
  require_rank_exactly(f, spec, "sample_proximal_normal");
  Rng rng = make_rng(seed, 0x70726f78);
  const Eigen::Index bm = base.rows() - spec.s;
  const Eigen::Index bn = base.cols() - spec.s;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(bm, bn);
  if (block.size() > 0) {
    block = gaussian(bm, bn, rng);
    // Frobenius norm bounds the spectral norm, so this keeps ||W||_2 < sigma_s / 2.
    const double radius = spec.s > 0 ? f.sigma(spec.s - 1) : 1.0;
    const double norm = block.norm();
    if (norm > 0.0) block *= uniform(0.05, 0.45, rng) * radius / norm;
  }
  const double lambda = uniform(0.5, 2.0, rng);
  return proximal_normal_impl(base, f, spec, block, lambda);
}

double prox_regularity_certificate(const Matrix& base, const RankSetSpec& spec) {
  spec.validate(base.rows(), base.cols());
  if (spec.s < 1) throw PreconditionError("prox_regularity_certificate: requires s >= 1");
  const SvdFactors f = svd(base);
  require_rank_exactly(f, spec, "prox_regularity_certificate");
  return f.sigma(spec.s - 1) / 4.0;
}

}  // namespace rankfeas
