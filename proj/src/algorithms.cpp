#include "rankfeas/algorithms.hpp"

#include "rankfeas/random.hpp"

#include <cmath>

namespace rankfeas {

std::string to_string(InexactStrategy s) {
  switch (s) {
    case InexactStrategy::exact: return "exact";
    case InexactStrategy::perturbed: return "perturbed";
    case InexactStrategy::truncated_inner: return "truncated_inner";
  }
  return "exact";
}

InexactStrategy parse_strategy(const std::string& name) {
  if (name == "exact") return InexactStrategy::exact;
  if (name == "perturbed") return InexactStrategy::perturbed;
  if (name == "truncated_inner" || name == "truncated-inner") return InexactStrategy::truncated_inner;
  throw ConfigError("unknown inexact strategy '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in [0, 1)");
  if (max_iters < 1) throw ParameterError("max_iters must be positive");
  if (!(stop_gap > 0.0)) throw ParameterError("stop_gap must be positive");
}

SetProjector rank_projector(const RankSetSpec& spec) {
  return {[spec](const Matrix& x) { return project_rank(x, spec).point; },
          [spec](const Matrix& x) { return project_rank(x, spec).distance; }};
}

SetProjector constraint_projector(const Constraint& c) {
  return {[c](const Matrix& x) { return project(c, x); },
          [c](const Matrix& x) { return distance_to(c, x); }};
}

namespace {

constexpr double kCoincidence = 1e-15;

bool coincide(const Matrix& a, const Matrix& b) {
  return distance(a, b) <= kCoincidence * (1.0 + fro_norm(a));
}

// Runs `step`, converting non-finite arithmetic into a DivergenceError that carries the trace.
template <class F>
auto guarded(IterateTrace& trace, F&& step) {
  try {
    return step();
  } catch (const DivergenceError&) {
    throw;
  } catch (const NumericalError& e) {
    throw DivergenceError(std::string("iteration diverged: ") + e.what(), trace);
  }
}

void keep(IterateTrace& trace, const SolverConfig& cfg, const Matrix& x) {
  if (cfg.keep_iterates) trace.iterates.push_back(x);
}

}  // namespace

IterateTrace alternating_projections(const SetProjector& proj_s, const SetProjector& proj_m,
                                     const Matrix& x0, const Matrix& x1, const SolverConfig& cfg) {
  cfg.validate();
  require_same_shape(x0, x1, "alternating_projections");
  IterateTrace trace;
  trace.algorithm = "ap";
  keep(trace, cfg, x0);
  keep(trace, cfg, x1);

  // x0 lies in S, so its distance to S is zero; the step into M is its M-distance.
  trace.rows.push_back({0, distance(x1, x0), 0.0, proj_m.distance(x0)});
  Matrix current = x1;
  int k = 1;
  while (k < cfg.max_iters) {
    Matrix next = guarded(trace, [&] { return (k % 2 == 1 ? proj_s : proj_m).project(current); });
    const double step = distance(next, current);
    if (k % 2 == 1) {
      // x^k is in M and x^{k+1} = P_S(x^k).
      trace.rows.push_back({k, step, step, proj_m.distance(current)});
    } else {
      trace.rows.push_back({k, step, 0.0, step});
    }
    current = std::move(next);
    ++k;
    keep(trace, cfg, current);
    if (k % 2 == 0 && step <= cfg.stop_gap) {
      trace.converged = true;
      break;
    }
  }
  trace.final_point = current;
  trace.final_dist_s = proj_s.distance(current);
  trace.final_residual_m = proj_m.distance(current);
  return trace;
}

Matrix ray_projection_onto_m(const Constraint& c, const Matrix& origin, const Matrix& direction) {
  require_same_shape(origin, direction, "ray_projection_onto_m");
  const double dnorm = fro_norm(direction);
  if (dnorm != 0.0 && std::abs(dnorm - 1.0) > 1e-10) {
    throw ParameterError("ray direction must be zero or unit length");
  }
  const double feas_tol = 1e-8 * std::max(1.0, fro_norm(origin));
  if (dnorm == 0.0) {
    if (distance_to(c, origin) <= feas_tol) return project(c, origin);
    throw NoIntersectionError("empty ray: zero direction from a point outside M");
  }

  if (const auto* a = std::get_if<AffineConstraint>(&c)) {
    // One-dimensional least squares in the orthonormal measurement coordinates.
    const Eigen::VectorXd g =
        a->basis().transpose() * origin.vec() - a->basis().transpose() * a->project(origin).vec();
    const Eigen::VectorXd h = a->basis().transpose() * direction.vec();
    const double hh = h.squaredNorm();
    double tau = 0.0;
    if (hh > 1e-24) tau = std::max(0.0, g.dot(h) / hh);
    Matrix point = origin - tau * direction;
    if (a->distance(point) > feas_tol) throw NoIntersectionError("ray misses the affine set");
    return point;
  }

  const auto& g = std::get<MagnitudeConstraint>(c);
  const double base_dist = g.distance(origin);
  if (base_dist <= feas_tol) return origin;
  const double tau_max = 10.0 * base_dist;
  // Any feasible point of the ray solves |y_j - tau e_j| = b_j for every j, in
  // particular for the coordinate moving fastest along the ray.
  const Eigen::VectorXd y = g.transform() * origin.vec();
  const Eigen::VectorXd e = g.transform() * direction.vec();
  Eigen::Index j0 = 0;
  e.cwiseAbs().maxCoeff(&j0);
  std::vector<double> taus{(y(j0) - g.moduli()(j0)) / e(j0), (y(j0) + g.moduli()(j0)) / e(j0)};
  std::sort(taus.begin(), taus.end());
  for (double tau : taus) {
    if (tau < 0.0 || tau > tau_max) continue;
    Matrix point = origin - tau * direction;
    if (g.residual(point) <= feas_tol) return point;
  }
  throw NoIntersectionError("ray misses the magnitude set within [0, tau_max]");
}

namespace {

// Distance from z to the span of sampled proximal normals of a magnitude set at `at`.
double sampled_cone_distance(const MagnitudeConstraint& c, const Matrix& at, const Matrix& z,
                             std::uint64_t seed) {
  const Eigen::Index n = c.rows() * c.cols();
  Eigen::MatrixXd basis(n, 0);
  for (Eigen::Index t = 0; t < n + 4; ++t) {
    Eigen::VectorXd w = normal_cone_magnitude_sample(c, at, seed + static_cast<std::uint64_t>(t)).vec();
    const double norm0 = w.norm();
    for (int pass = 0; pass < 2; ++pass) w -= basis * (basis.transpose() * w);
    if (w.norm() > 1e-10 * norm0 && norm0 > 0.0) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = w.normalized();
    }
  }
  const Eigen::VectorXd v = z.vec();
  return (v - basis * (basis.transpose() * v)).norm();
}

ConditionRecord check_odd_step(const Constraint& c, const Matrix& even, const Matrix& candidate,
                               double prev_gap, const SolverConfig& cfg, int iterate,
                               std::uint64_t sample_seed) {
  ConditionRecord rec;
  rec.iterate = iterate;
  const double step = distance(candidate, even);
  const bool zero = coincide(candidate, even);
  const Matrix z_hat = zero ? Matrix(even.rows(), even.cols()) : (1.0 / step) * (even - candidate);
  rec.zero_direction = zero;

  std::optional<Matrix> x_star;
  try {
    x_star = ray_projection_onto_m(c, even, z_hat);
  } catch (const NoIntersectionError&) {
    x_star.reset();
  }

  rec.step_monotone = step <= prev_gap * (1.0 + 1e-12) + kCoincidence;
  if (!x_star) {
    // Without a ray point the coincidence rule and the cone test cannot be evaluated.
    rec.coincidence = false;
    rec.cone_distance = false;
    rec.d_nm = std::numeric_limits<double>::infinity();
    return rec;
  }
  rec.coincidence = !coincide(*x_star, even) || zero;
  if (zero) {
    rec.d_nm = 0.0;
  } else if (const auto* a = std::get_if<AffineConstraint>(&c)) {
    rec.d_nm = a->normal_space_distance(z_hat);
  } else {
    rec.d_nm = sampled_cone_distance(std::get<MagnitudeConstraint>(c), *x_star, z_hat, sample_seed);
    rec.estimated = true;
  }
  // z_hat is a difference quotient; its normal component carries rounding of order eps * |x| / step.
  const double rounding =
      zero ? 0.0 : 8.0 * std::numeric_limits<double>::epsilon() * (fro_norm(even) + fro_norm(candidate)) / step;
  rec.cone_distance = rec.d_nm <= cfg.gamma + cfg.tol.condition + rounding;
  return rec;
}

// Exact projection plus a random tangent offset sized so that the cone distance of
// z_hat stays below gamma; returns nullopt when no usable offset exists.
std::optional<Matrix> perturbed_candidate(const AffineConstraint& a, const Matrix& even,
                                          const Matrix& exact, double gamma, Rng& rng) {
  const double d = distance(even, exact);
  if (d == 0.0 || gamma == 0.0) return std::nullopt;
  Eigen::VectorXd t = a.tangent_part(gaussian(even.size(), 1, rng).col(0));
  const double tn = t.norm();
  if (tn == 0.0) return std::nullopt;
  const double size = uniform(0.0, 1.0, rng) * gamma * d / std::sqrt(1.0 - gamma * gamma);
  t *= size / tn;
  return exact + Matrix::from_vec(t, even.rows(), even.cols());
}

// Damped inner iteration inside M, started from the previous odd iterate, stopped once
// the tangential part of the residual is at most gamma / 4 of the residual.
std::optional<Matrix> truncated_candidate(const AffineConstraint& a, const Matrix& even,
                                          const Matrix& previous_odd, double gamma) {
  if (gamma == 0.0) return std::nullopt;
  Eigen::VectorXd y = previous_odd.vec();
  const Eigen::VectorXd target = even.vec();
  for (int inner = 0; inner < 200; ++inner) {
    const Eigen::VectorXd residual = target - y;
    const Eigen::VectorXd tangent = a.tangent_part(residual);
    if (tangent.norm() <= 0.25 * gamma * residual.norm()) {
      return Matrix::from_vec(y, even.rows(), even.cols());
    }
    y += 0.5 * tangent;
  }
  return std::nullopt;
}

}  // namespace

IterateTrace inexact_alternating_projections(const RankSetSpec& spec, const Constraint& c,
                                             const Matrix& x0, const Matrix& x1,
                                             const SolverConfig& cfg) {
  cfg.validate();
  require_same_shape(x0, x1, "inexact_alternating_projections");
  spec.validate(x0.rows(), x0.cols());
  IterateTrace trace;
  trace.algorithm = "inexact-ap";
  Rng rng = make_rng(cfg.seed, 0x696e6578);
  const bool affine = std::holds_alternative<AffineConstraint>(c);
  if (!affine && cfg.inexact_strategy != InexactStrategy::exact) {
    trace.notes.push_back(
        "magnitude set is locally discrete: no inexact M-step stays in M, exact projections used");
  }
  if (affine && cfg.inexact_strategy != InexactStrategy::exact) {
    trace.notes.push_back("affine set has empty interior: inexactness is tangential, no extrapolation");
  }
  keep(trace, cfg, x0);
  keep(trace, cfg, x1);

  trace.rows.push_back({0, distance(x1, x0), 0.0, distance_to(c, x0)});
  Matrix current = x1;  // x^k with k odd at the top of the loop
  int k = 1;
  while (k < cfg.max_iters) {
    // Even step: exact projection onto S.
    const Matrix odd = current;
    const Matrix even = guarded(trace, [&] { return project_rank(odd, spec).point; });
    const double gap = distance(even, odd);
    trace.rows.push_back({k, gap, gap, distance_to(c, odd)});
    current = even;
    keep(trace, cfg, even);
    if (gap <= cfg.stop_gap) {
      trace.converged = true;
      break;
    }
    if (k + 1 >= cfg.max_iters) break;

    // Odd step: strategy candidate, verified, exact fallback on rejection.
    const int produced = k + 2;
    const Matrix exact = guarded(trace, [&] { return project(c, even); });
    const std::uint64_t sample_seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(produced);
    std::optional<ConditionRecord> accepted;
    Matrix chosen = exact;
    int rejected = 0;
    if (affine && cfg.inexact_strategy == InexactStrategy::perturbed) {
      const auto& a = std::get<AffineConstraint>(c);
      for (int attempt = 0; attempt < 20 && !accepted; ++attempt) {
        auto cand = perturbed_candidate(a, even, exact, cfg.gamma, rng);
        if (!cand) break;
        ConditionRecord rec = check_odd_step(c, even, *cand, gap, cfg, produced, sample_seed);
        if (rec.all_pass()) {
          accepted = rec;
          chosen = *cand;
        } else {
          ++rejected;
        }
      }
    } else if (affine && cfg.inexact_strategy == InexactStrategy::truncated_inner) {
      const auto& a = std::get<AffineConstraint>(c);
      if (auto cand = truncated_candidate(a, even, odd, cfg.gamma)) {
        ConditionRecord rec = check_odd_step(c, even, *cand, gap, cfg, produced, sample_seed);
        if (rec.all_pass()) {
          accepted = rec;
          chosen = *cand;
        } else {
          ++rejected;
        }
      }
    }
    if (!accepted) {
      accepted = check_odd_step(c, even, exact, gap, cfg, produced, sample_seed);
      accepted->fallback = rejected > 0;
    }
    accepted->rejected = rejected;
    trace.condition_log.push_back(*accepted);

    IterateRecord row{k + 1, distance(chosen, even), 0.0, distance_to(c, even)};
    row.conditions = *accepted;
    trace.rows.push_back(row);
    current = chosen;
    keep(trace, cfg, current);
    k += 2;
  }
  trace.final_point = current;
  trace.final_dist_s = project_rank(current, spec).distance;
  trace.final_residual_m = distance_to(c, current);
  return trace;
}

IterateTrace averaged_projections(const RankSetSpec& spec, const Constraint& c, const Matrix& x0,
                                  const SolverConfig& cfg) {
  cfg.validate();
  spec.validate(x0.rows(), x0.cols());
  IterateTrace trace;
  trace.algorithm = "averaged";
  keep(trace, cfg, x0);
  Matrix x = x0;
  double previous_objective = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.max_iters; ++k) {
    const ProjectionResult ps = guarded(trace, [&] { return project_rank(x, spec); });
    const Matrix pm = guarded(trace, [&] { return project(c, x); });
    const double dist_m = distance(x, pm);
    Matrix next = guarded(trace, [&] { return Matrix(Eigen::MatrixXd(0.5 * (ps.point.eigen() + pm.eigen()))); });
    IterateRecord row{k, distance(next, x), ps.distance, dist_m};
    row.objective = 0.5 * (ps.distance * ps.distance + dist_m * dist_m);
    if (row.objective > previous_objective * (1.0 + 1e-12) + 1e-300) ++trace.monotonicity_warnings;
    previous_objective = row.objective;
    trace.rows.push_back(row);
    x = std::move(next);
    keep(trace, cfg, x);
    if (row.step_norm <= cfg.stop_gap) {
      trace.converged = true;
      break;
    }
  }
  if (trace.monotonicity_warnings > 0) {
    trace.notes.push_back("objective increased on " + std::to_string(trace.monotonicity_warnings) +
                          " iterations (outside a prox-regular neighbourhood?)");
  }
  trace.final_point = x;
  trace.final_dist_s = project_rank(x, spec).distance;
  trace.final_residual_m = distance_to(c, x);
  return trace;
}

IterateTrace product_space_ap(const RankSetSpec& spec, const Constraint& c, const Matrix& x0,
                              const SolverConfig& cfg) {
  cfg.validate();
  spec.validate(x0.rows(), x0.cols());
  const Eigen::Index m = x0.rows();
  const Eigen::Index n = x0.cols();
  const Eigen::Index len = x0.size();
  IterateTrace trace;
  trace.algorithm = "product-space";
  keep(trace, cfg, x0);

  // Points of the doubled space (x, y) stored as [vec x; vec y].
  Eigen::VectorXd pair(2 * len);
  pair << x0.vec(), x0.vec();
  for (int k = 0; k < cfg.max_iters; ++k) {
    const Matrix x = Matrix::from_vec(pair.head(len), m, n);
    const Matrix y = Matrix::from_vec(pair.tail(len), m, n);
    // Projection onto Omega = S x M acts componentwise.
    const ProjectionResult ps = guarded(trace, [&] { return project_rank(x, spec); });
    const Matrix pm = guarded(trace, [&] { return project(c, y); });
    Eigen::VectorXd omega(2 * len);
    omega << ps.point.vec(), pm.vec();
    // Projection onto the diagonal D averages the two components.
    const Eigen::VectorXd mean = 0.5 * (omega.head(len) + omega.tail(len));
    Eigen::VectorXd next(2 * len);
    next << mean, mean;
    if (!next.allFinite()) throw DivergenceError("product-space iteration diverged", trace);

    const double step = (next.head(len) - pair.head(len)).norm();
    trace.rows.push_back({k, step, ps.distance, distance(y, pm)});
    pair = std::move(next);
    keep(trace, cfg, Matrix::from_vec(pair.head(len), m, n));
    if (step <= cfg.stop_gap) {
      trace.converged = true;
      break;
    }
  }
  trace.final_point = Matrix::from_vec(pair.head(len), m, n);
  trace.final_dist_s = project_rank(trace.final_point, spec).distance;
  trace.final_residual_m = distance_to(c, trace.final_point);
  return trace;
}

double rate_bound(double c_bar, double gamma, bool m_prox_regular) {
  if (!(c_bar >= 0.0 && c_bar < 1.0)) throw ParameterError("rate_bound: c_bar must lie in [0, 1)");
  if (!(gamma >= 0.0)) throw ParameterError("rate_bound: gamma must be nonnegative");
  const double cap = std::sqrt(1.0 - c_bar * c_bar);
  if (gamma >= cap) throw HypothesisError("rate_bound: gamma must be < sqrt(1 - c^2)");
  const double rate = c_bar * std::sqrt(1.0 - gamma * gamma) + gamma * cap;
  return m_prox_regular ? rate : std::sqrt(rate);
}

double averaged_rate_prediction(double c_bar) {
  if (!(c_bar >= 0.0 && c_bar <= 1.0)) throw ParameterError("averaged_rate_prediction: c_bar in [0, 1]");
  return 0.5 * (1.0 + c_bar);
}

}  // namespace rankfeas
