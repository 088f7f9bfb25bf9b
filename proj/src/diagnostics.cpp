#include "rankfeas/diagnostics.hpp"

#include "rankfeas/random.hpp"

#include <cmath>

namespace rankfeas {

std::string to_string(AngleMethod m) {
  return m == AngleMethod::subspace_exact ? "subspace_exact" : "sampled";
}

namespace {

struct NormalFrame {
  Eigen::MatrixXd left;   // U_perp, m x (m - s)
  Eigen::MatrixXd right;  // V_perp, n x (n - s)
};

NormalFrame normal_frame(const Matrix& base, const RankSetSpec& spec, const char* op) {
  spec.validate(base.rows(), base.cols());
  const SvdFactors f = svd(base);
  const int rank = numeric_rank(f, spec.rank_tol);
  if (rank != spec.s) {
    throw PreconditionError(std::string(op) + ": base point has rank " + std::to_string(rank) +
                            ", expected s = " + std::to_string(spec.s));
  }
  return {f.u.rightCols(f.u.cols() - spec.s), f.v.rightCols(f.v.cols() - spec.s)};
}

// ||projection of v onto span{u_i v_j^T : i, j >= s}||, i.e. ||U_perp^T v V_perp||_F.
double normal_component(const NormalFrame& frame, const Eigen::MatrixXd& v) {
  if (frame.left.cols() == 0 || frame.right.cols() == 0) return 0.0;
  return (frame.left.transpose() * v * frame.right).norm();
}

RegularityReport finish(double c_bar, AngleMethod method, std::string note) {
  RegularityReport r;
  r.c_bar = std::clamp(c_bar, 0.0, 1.0);
  r.angle_rad = std::acos(r.c_bar);
  r.strongly_regular = r.c_bar < 1.0 - kStrongRegularityMargin;
  r.method = method;
  r.note = std::move(note);
  return r;
}

template <class SampleNormal>
RegularityReport sampled_estimate(const NormalFrame& frame, int n_samples, SampleNormal&& sample) {
  if (n_samples < 1) throw ParameterError("angle_constant_sampled: n_samples must be >= 1");
  double best = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Eigen::MatrixXd v = sample(i);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    best = std::max(best, normal_component(frame, v) / norm);
  }
  return finish(best, AngleMethod::sampled, "lower bound from " + std::to_string(n_samples) + " sampled normals");
}

}  // namespace

RegularityReport angle_constant(const Matrix& base, const RankSetSpec& spec, const AffineConstraint& c) {
  require_same_shape(base, Matrix(c.rows(), c.cols()), "angle_constant");
  const NormalFrame frame = normal_frame(base, spec, "angle_constant");
  if (c.distance(base) > 1e-8 * std::max(1.0, fro_norm(base))) {
    throw PreconditionError("angle_constant: base point is not in M");
  }
  if (frame.left.cols() == 0 || frame.right.cols() == 0) {
    return finish(0.0, AngleMethod::subspace_exact, "degenerate cone: s = min(m, n), N_S = {0}");
  }
  // Coordinates of each orthonormal normal of M in the orthonormal basis of N_S.
  const Eigen::Index dim_s = frame.left.cols() * frame.right.cols();
  Eigen::MatrixXd cross(dim_s, c.basis().cols());
  for (Eigen::Index k = 0; k < c.basis().cols(); ++k) {
    const Matrix g = Matrix::from_vec(c.basis().col(k), c.rows(), c.cols());
    const Eigen::MatrixXd coeffs = frame.left.transpose() * g.eigen() * frame.right;
    cross.col(k) = coeffs.reshaped<Eigen::RowMajor>();
  }
  const double c_bar = cross.cols() == 0 ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXd>(cross).singularValues()(0);
  return finish(c_bar, AngleMethod::subspace_exact, "");
}

RegularityReport angle_constant_sampled(const Matrix& base, const RankSetSpec& spec,
                                        const MagnitudeConstraint& c, int n_samples,
                                        std::uint64_t seed) {
  if (n_samples < 1) throw ParameterError("angle_constant_sampled: n_samples must be >= 1");
  const NormalFrame frame = normal_frame(base, spec, "angle_constant_sampled");
  if (c.residual(base) > 1e-8) throw PreconditionError("angle_constant_sampled: base point is not in M");
  return sampled_estimate(frame, n_samples, [&](int i) {
    return normal_cone_magnitude_sample(c, base, seed * 7919ULL + static_cast<std::uint64_t>(i)).eigen();
  });
}

RegularityReport angle_constant_sampled(const Matrix& base, const RankSetSpec& spec,
                                        const AffineConstraint& c, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ParameterError("angle_constant_sampled: n_samples must be >= 1");
  const NormalFrame frame = normal_frame(base, spec, "angle_constant_sampled");
  if (c.distance(base) > 1e-8 * std::max(1.0, fro_norm(base))) {
    throw PreconditionError("angle_constant_sampled: base point is not in M");
  }
  Rng rng = make_rng(seed, 0x616e676c);
  return sampled_estimate(frame, n_samples, [&](int) {
    const Eigen::VectorXd w = c.basis() * gaussian(c.basis().cols(), 1, rng).col(0);
    return Matrix::from_vec(w, c.rows(), c.cols()).eigen();
  });
}

bool strong_regularity_probe(const Matrix& base, const RankSetSpec& spec,
                             const std::vector<Matrix>& normals_m, double subspace_tol) {
  spec.validate(base.rows(), base.cols());
  if (normals_m.empty()) throw ParameterError("strong_regularity_probe: no normals supplied");
  const SvdFactors fb = svd(base);
  if (numeric_rank(fb, spec.rank_tol) > spec.s) {
    throw PreconditionError("strong_regularity_probe: base point is not in S");
  }
  const Eigen::MatrixXd support = row_space_basis(fb, spec.rank_tol);
  for (const auto& v : normals_m) {
    require_same_shape(base, v, "strong_regularity_probe");
    if (fro_norm(v) == 0.0) continue;
    const SvdFactors fv = svd(v);
    if (largest_principal_cosine(row_space_basis(fv, spec.rank_tol), support) < 1.0 - subspace_tol) {
      return false;
    }
  }
  return true;
}

RateReport fit_linear_rate(const IterateTrace& trace, const std::optional<Matrix>& target,
                           double predicted_rate) {
  if (trace.iterations() < 10) {
    throw InsufficientDataError("fit_linear_rate: need at least 10 iterations, trace has " +
                                std::to_string(trace.iterations()));
  }
  RateReport report;
  report.predicted_rate = predicted_rate;

  std::vector<double> errors;
  std::vector<int> index;
  if (target) {
    if (trace.iterates.empty()) {
      throw PreconditionError("fit_linear_rate: error-to-target fit needs a trace with kept iterates");
    }
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
      errors.push_back(distance(trace.iterates[k], *target));
      index.push_back(static_cast<int>(k));
    }
  } else {
    for (const auto& row : trace.rows) {
      errors.push_back(row.step_norm);
      index.push_back(row.k);
    }
  }

  std::size_t usable = errors.size();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) {
      usable = i;
      report.notes.push_back("zero residual at k = " + std::to_string(index[i]) + ": window truncated");
      break;
    }
  }
  const auto window = static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(usable)));
  if (window < 5) {
    throw InsufficientDataError("fit_linear_rate: only " + std::to_string(window) +
                                " usable points in the tail window");
  }
  const std::size_t first = usable - window;

  double mean_k = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = first; i < usable; ++i) {
    mean_k += index[i];
    mean_y += std::log(errors[i]);
  }
  mean_k /= static_cast<double>(window);
  mean_y /= static_cast<double>(window);
  double skk = 0.0;
  double sky = 0.0;
  for (std::size_t i = first; i < usable; ++i) {
    const double dk = index[i] - mean_k;
    skk += dk * dk;
    sky += dk * (std::log(errors[i]) - mean_y);
  }
  const double slope = sky / skk;
  double sse = 0.0;
  for (std::size_t i = first; i < usable; ++i) {
    const double fit = mean_y + slope * (index[i] - mean_k);
    sse += (std::log(errors[i]) - fit) * (std::log(errors[i]) - fit);
  }

  report.empirical_rate = std::exp(slope);
  report.first_k = index[first];
  report.last_k = index[usable - 1];
  report.fit_residual = std::sqrt(sse / static_cast<double>(window));
  const bool decaying = slope < 0.0;
  if (!decaying) report.notes.push_back("insufficient decay: fitted slope is not negative");
  report.compliant =
      decaying && std::isfinite(predicted_rate) && report.empirical_rate <= predicted_rate + kRateSlack;
  return report;
}

}  // namespace rankfeas
