#pragma once

#include "rankfeas/algorithms.hpp"
#include "rankfeas/constraint_sets.hpp"
#include "rankfeas/diagnostics.hpp"
#include "rankfeas/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rankfeas {

enum class ConstraintKind { affine, magnitude };

std::string to_string(ConstraintKind k);
ConstraintKind parse_constraint_kind(const std::string& name);

/// Algorithms selectable from configs and the command line.
inline const std::vector<std::string> kAlgorithmNames = {"ap", "inexact-ap", "averaged", "product-space"};

struct ExperimentConfig {
  int m = 20;
  int n = 20;
  int s = 3;
  ConstraintKind kind = ConstraintKind::affine;
  /// Number of affine measurements; 0 selects ceil(s (m + n - s) / 2), at least 1.
  /// Above s (m + n - s) the normal spaces of S and M always meet, so c_bar = 1.
  int p = 0;
  std::vector<double> gammas{0.0};
  std::vector<std::string> algorithms{"ap"};
  std::vector<std::uint64_t> seeds{0};
  std::vector<double> deltas{0.01, 0.05, 0.1, 0.2};
  Tolerances tol{};
  std::string output = "rankfeas-out";
  int max_iters = 10000;
  double stop_gap = 1e-10;
  InexactStrategy strategy = InexactStrategy::perturbed;
  /// Sampled normals per magnitude-set angle estimate.
  int angle_samples = 64;
  /// Re-seeding attempts for instances that fail the strong-regularity check.
  int max_reseeds = 10;

  int effective_p() const;
  /// Throws ConfigError on empty sweeps, bad dimensions or unknown names.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

struct Instance {
  std::uint64_t seed = 0;
  Matrix x_star{1, 1};
  Constraint constraint;
};

/// Planted x* of rank exactly s with singular values in [1, 2], and a constraint
/// set that contains it. Deterministic in (cfg, seed).
Instance generate_instance(const ExperimentConfig& cfg, std::uint64_t seed);

/// x0 = P_S(x* + delta E) for a unit E seeded by (seed, delta_index).
Matrix start_point(const Instance& inst, int s, double delta, std::uint64_t seed, int delta_index);

/// c_bar at x*: exact for affine sets, a sampled lower bound for magnitude sets.
RegularityReport instance_regularity(const ExperimentConfig& cfg, const Instance& inst);

/// Whether M is prox-regular at x*: always for affine sets, and for magnitude sets
/// when every modulus is positive (M is then locally a single point).
bool instance_prox_regular(const ExperimentConfig& cfg, const Instance& inst);

struct SolveRequest {
  std::string algorithm = "ap";
  int s = 0;
  SolverConfig solver{};
};

/// Runs one named algorithm from x0 (x1 = P_M(x0) for the alternating methods).
IterateTrace solve(const SolveRequest& req, const Constraint& c, const Matrix& x0);

/// Rate predicted for an algorithm at angle constant c_bar; NaN when the inexact
/// hypothesis gamma < sqrt(1 - c^2) fails.
double predicted_rate(const std::string& algorithm, double c_bar, double gamma, bool prox_regular);

struct RunRecord {
  std::string run_id;
  std::string algorithm;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t instance_seed = 0;
  int reseeds = 0;
  double delta = 0.0;
  std::string status;  ///< converged | max_iters | error
  std::string error;
  int iterations = 0;
  double final_dist_s = 0.0;
  double final_residual_m = 0.0;
  std::optional<bool> conditions_pass;
  int fallbacks = 0;
  RegularityReport regularity;
  std::optional<RateReport> rate;
  std::string trace_jsonl;  ///< relative to the output directory
  std::string trace_csv;
};

struct ExperimentLedger {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  std::vector<std::string> notes;

  int fatal_errors() const;
};

/// Runs the full algorithm x gamma x seed x delta product, writing traces under
/// <output>/traces and the ledger to <output>/ledger.json (atomically), with
/// wall-clock metadata in <output>/ledger.meta.json.
ExperimentLedger run_experiment(const ExperimentConfig& cfg);

std::string ledger_to_json(const ExperimentLedger& ledger);
ExperimentLedger ledger_from_json(const std::string& text);
ExperimentLedger load_ledger(const std::string& path);

/// Writes <out_dir>/plots/<run_id>.csv (k,log_step_norm) and <out_dir>/plots/summary.csv
/// (gamma,c_bar,predicted_rate,empirical_rate). Trace paths resolve against trace_root;
/// empirical rates are refit from the trace CSVs.
void emit_plot_data(const ExperimentLedger& ledger, const std::string& trace_root, const std::string& out_dir);

/// Single-record JSON forms of the diagnostics reports, as stored in the ledger.
std::string regularity_to_json(const RegularityReport& r);
std::string rate_to_json(const RateReport& r);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rankfeas
