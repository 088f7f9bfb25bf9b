#pragma once

#include "rankfeas/matrix.hpp"
#include "rankfeas/svd.hpp"
#include "rankfeas/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rankfeas {

/// A nonnegative real or +infinity. Infinity is a tag, never an IEEE value.
class ExtendedReal {
 public:
  explicit ExtendedReal(double value) : value_(value) {}
  static ExtendedReal infinity() { return ExtendedReal(); }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  /// Finite value; throws ParameterError on infinity.
  double value() const;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal() = default;
  std::optional<double> value_;
};

/// The rank lower level set S = {y : rank(y) <= s} together with its tolerances.
struct RankSetSpec {
  int s = 0;
  /// Relative tie band: sigma_s and sigma_{s+1} tie when their gap <= tie_tol * max(1, sigma_1).
  double tie_tol = Tolerances{}.tie;
  double rank_tol = Tolerances{}.rank;

  /// Throws ParameterError unless 0 <= s <= min(rows, cols).
  void validate(Eigen::Index rows, Eigen::Index cols) const;
};

struct ProjectionResult {
  Matrix point;
  double distance = 0.0;
  ExtendedReal alpha_s{0.0};
  /// |J(x, alpha_s)|
  int j_count = 0;
  bool multivalued = false;
};

struct NormalConeQuery {
  Matrix base;
  Matrix vector;
  double subspace_tol = Tolerances{}.subspace;
};

/// U * diag_embed(sigma_1..sigma_s, 0..0) * V^T.
Matrix sigma_truncate(const SvdFactors& f, int s);

/// Zero-based indices j with sigma_j >= alpha - tie_tol * max(1, sigma_1); empty for alpha = +inf.
std::vector<int> j_set(const SvdFactors& f, const ExtendedReal& alpha, double tie_tol);
std::vector<int> j_set(const Matrix& x, const ExtendedReal& alpha, double tie_tol = Tolerances{}.tie);

/// sup{alpha : |J(x, alpha)| >= s}: +inf for s = 0, sigma_s otherwise, and exactly
/// 0 when the numeric rank of x is below s.
ExtendedReal alpha_s(const SvdFactors& f, int s, double rank_tol);
ExtendedReal alpha_s(const Matrix& x, int s, double rank_tol = Tolerances{}.rank);

/// Nearest point of S under the canonical SVD, plus the multivaluedness certificate.
ProjectionResult project_rank(const Matrix& x, const RankSetSpec& spec);
ProjectionResult project_rank(const Matrix& x, const SvdFactors& f, const RankSetSpec& spec);

/// Distinct members of P_S(x) obtained by choosing which tied singular triplets
/// to keep. The canonical representative comes first.
std::vector<Matrix> enumerate_projection_representatives(const Matrix& x, const RankSetSpec& spec,
                                                         int limit);

/// Membership in the normal cone as written in closed form: rank(v) <= r - s and
/// the row spaces of v and the base point intersect only in 0.
bool stated_normal_cone_member(const NormalConeQuery& q, const RankSetSpec& spec);

/// Trace-orthonormal basis {u_i v_j^T : i, j >= s} of the proximal normal cone at a
/// rank-s point, built from the complement singular vectors.
std::vector<Matrix> normal_subspace_basis(const Matrix& base, const RankSetSpec& spec);

/// lambda * (x - base) with x = base + U_perp W V_perp^T. Requires ||W||_2 < sigma_s(base) / 2
/// and certifies that project_rank(x) returns base.
Matrix proximal_normal_from_block(const Matrix& base, const RankSetSpec& spec,
                                  const Eigen::MatrixXd& block, double lambda);

/// Seeded proximal normal at a rank-s point.
Matrix sample_proximal_normal(const Matrix& base, const RankSetSpec& spec, std::uint64_t seed);

/// Radius sigma_s(base) / 4 of a ball on which the projection stays single valued.
double prox_regularity_certificate(const Matrix& base, const RankSetSpec& spec);

}  // namespace rankfeas
