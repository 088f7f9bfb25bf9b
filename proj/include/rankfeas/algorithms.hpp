#pragma once

#include "rankfeas/constraint_sets.hpp"
#include "rankfeas/errors.hpp"
#include "rankfeas/matrix.hpp"
#include "rankfeas/rank_set.hpp"
#include "rankfeas/tolerances.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rankfeas {

enum class InexactStrategy { exact, perturbed, truncated_inner };

std::string to_string(InexactStrategy s);
InexactStrategy parse_strategy(const std::string& name);

struct SolverConfig {
  /// Inexactness budget for the odd (M) steps, in [0, 1).
  double gamma = 0.0;
  /// Maximum number of projection steps.
  int max_iters = 10000;
  /// Converged once an S-step moves by at most this much.
  double stop_gap = 1e-10;
  std::uint64_t seed = 0;
  InexactStrategy inexact_strategy = InexactStrategy::exact;
  /// Keep every iterate in the trace (needed for error-to-target rate fits).
  bool keep_iterates = false;
  Tolerances tol{};

  void validate() const;
};

/// Acceptance checks of one inexact M-step.
struct ConditionRecord {
  int iterate = 0;           ///< index 2k+1 of the accepted odd iterate
  bool step_monotone = true;  ///< ||x^{2k+1} - x^{2k}|| <= ||x^{2k} - x^{2k-1}||
  bool coincidence = true;    ///< x^{2k+1} = x^{2k} whenever the ray point equals x^{2k}
  bool cone_distance = true;  ///< d_{N_M(x_*)}(z_hat) <= gamma
  double d_nm = 0.0;
  bool zero_direction = false;  ///< z_hat = 0 was used
  bool estimated = false;       ///< d_nm from sampled normals (magnitude sets)
  bool fallback = false;        ///< the strategy's candidate was rejected; exact projection used
  int rejected = 0;             ///< candidates rejected before acceptance

  bool all_pass() const noexcept { return step_monotone && coincidence && cone_distance; }
};

/// Row k describes iterate x^k.
struct IterateRecord {
  IterateRecord() = default;
  IterateRecord(int k_, double step, double ds, double rm) : k(k_), step_norm(step), dist_s(ds), residual_m(rm) {}

  int k = 0;
  double step_norm = 0.0;  ///< ||x^{k+1} - x^k||
  double dist_s = 0.0;     ///< distance of x^k to S
  double residual_m = 0.0; ///< distance of x^k to M
  /// Averaged projections only: (d_S^2 + d_M^2) / 2.
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::optional<ConditionRecord> conditions;
};

struct IterateTrace {
  std::string algorithm;
  std::vector<IterateRecord> rows;
  std::vector<ConditionRecord> condition_log;
  bool converged = false;
  Matrix final_point{1, 1};
  double final_dist_s = 0.0;
  double final_residual_m = 0.0;
  std::vector<Matrix> iterates;  ///< x^0 .. x^K when keep_iterates
  int monotonicity_warnings = 0;
  std::vector<std::string> notes;

  int iterations() const noexcept { return static_cast<int>(rows.size()); }
};

/// A non-finite iterate appeared; the partial trace is attached.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, IterateTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const IterateTrace& trace() const noexcept { return trace_; }

 private:
  IterateTrace trace_;
};

/// An exact projector plus the distance function of its set.
struct SetProjector {
  std::function<Matrix(const Matrix&)> project;
  std::function<double(const Matrix&)> distance;
};

SetProjector rank_projector(const RankSetSpec& spec);
SetProjector constraint_projector(const Constraint& c);

/// x^{2k} = P_S(x^{2k-1}), x^{2k+1} = P_M(x^{2k}), starting from x0 in S and x1 in M.
IterateTrace alternating_projections(const SetProjector& proj_s, const SetProjector& proj_m,
                                     const Matrix& x0, const Matrix& x1, const SolverConfig& cfg);

/// Alternating projections with inexact, verified M-steps.
IterateTrace inexact_alternating_projections(const RankSetSpec& spec, const Constraint& c,
                                             const Matrix& x0, const Matrix& x1,
                                             const SolverConfig& cfg);

/// Nearest point of M on the ray {origin - tau * direction : tau >= 0}.
/// `direction` must be zero or unit length. Throws NoIntersectionError when the ray misses M.
Matrix ray_projection_onto_m(const Constraint& c, const Matrix& origin, const Matrix& direction);

/// x^{k+1} = (P_S(x^k) + P_M(x^k)) / 2.
IterateTrace averaged_projections(const RankSetSpec& spec, const Constraint& c, const Matrix& x0,
                                  const SolverConfig& cfg);

/// Alternating projections between the diagonal D and S x M in the doubled space.
/// Rows describe the diagonal component.
IterateTrace product_space_ap(const RankSetSpec& spec, const Constraint& c, const Matrix& x0,
                              const SolverConfig& cfg);

/// c * sqrt(1 - gamma^2) + gamma * sqrt(1 - c^2), square-rooted when M is not prox-regular.
/// Throws HypothesisError when gamma >= sqrt(1 - c^2).
double rate_bound(double c_bar, double gamma, bool m_prox_regular);

/// Per-iteration rate predicted for averaged projections: the largest eigenvalue
/// (1 + c) / 2 of (P_A + P_B) / 2 on a pair of subspaces with principal cosine c.
double averaged_rate_prediction(double c_bar);

}  // namespace rankfeas
