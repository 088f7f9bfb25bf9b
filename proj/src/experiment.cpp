#include "rankfeas/experiment.hpp"

#include "rankfeas/random.hpp"
#include "rankfeas/trace_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace rankfeas {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(ConstraintKind k) { return k == ConstraintKind::affine ? "affine" : "magnitude"; }

ConstraintKind parse_constraint_kind(const std::string& name) {
  if (name == "affine") return ConstraintKind::affine;
  if (name == "magnitude") return ConstraintKind::magnitude;
  throw ConfigError("unknown constraint kind '" + name + "'");
}

int ExperimentConfig::effective_p() const {
  if (p > 0) return p;
  return std::max(1, (s * (m + n - s) + 1) / 2);
}

void ExperimentConfig::validate() const {
  if (m < 1 || n < 1) throw ConfigError("config: dims must be positive");
  if (s < 0 || s > std::min(m, n)) throw ConfigError("config: need 0 <= s <= min(m, n)");
  if (p < 0) throw ConfigError("config: p must be >= 0");
  if (kind == ConstraintKind::affine && effective_p() < 1) throw ConfigError("config: affine kind needs p >= 1");
  if (gammas.empty() || algorithms.empty() || seeds.empty() || deltas.empty()) {
    throw ConfigError("config: gammas, algorithms, seeds and deltas must be nonempty");
  }
  for (const auto& a : algorithms) {
    if (std::find(kAlgorithmNames.begin(), kAlgorithmNames.end(), a) == kAlgorithmNames.end()) {
      throw ConfigError("config: unknown algorithm '" + a + "'");
    }
  }
  for (double g : gammas) {
    if (!(g >= 0.0 && g < 1.0)) throw ConfigError("config: gamma must lie in [0, 1)");
  }
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("config: start distances must be finite and >= 0");
  }
  auto has_duplicates = [](auto v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_duplicates(gammas) || has_duplicates(algorithms) || has_duplicates(seeds) || has_duplicates(deltas)) {
    throw ConfigError("config: sweep lists must not repeat values");
  }
  if (max_iters < 1) throw ConfigError("config: max_iters must be >= 1");
  if (!(stop_gap > 0.0)) throw ConfigError("config: stop_gap must be > 0");
  if (angle_samples < 1) throw ConfigError("config: angle_samples must be >= 1");
  if (max_reseeds < 0) throw ConfigError("config: max_reseeds must be >= 0");
  if (output.empty()) throw ConfigError("config: output directory is empty");
}

namespace {

template <class T>
T field(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {"m", "n", "s", "kind", "p", "gammas", "algorithms", "seeds",
                                              "deltas", "tolerances", "output", "max_iters", "stop_gap",
                                              "strategy", "angle_samples", "max_reseeds"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError("config: unknown key '" + item.key() + "'");
  }
  ExperimentConfig cfg;
  cfg.m = field(j, "m", cfg.m);
  cfg.n = field(j, "n", cfg.n);
  cfg.s = field(j, "s", cfg.s);
  cfg.kind = parse_constraint_kind(field(j, "kind", to_string(cfg.kind)));
  cfg.p = field(j, "p", cfg.p);
  cfg.gammas = field(j, "gammas", cfg.gammas);
  cfg.algorithms = field(j, "algorithms", cfg.algorithms);
  cfg.seeds = field(j, "seeds", cfg.seeds);
  cfg.deltas = field(j, "deltas", cfg.deltas);
  cfg.output = field(j, "output", cfg.output);
  cfg.max_iters = field(j, "max_iters", cfg.max_iters);
  cfg.stop_gap = field(j, "stop_gap", cfg.stop_gap);
  try {
    cfg.strategy = parse_strategy(field(j, "strategy", to_string(cfg.strategy)));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.angle_samples = field(j, "angle_samples", cfg.angle_samples);
  cfg.max_reseeds = field(j, "max_reseeds", cfg.max_reseeds);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("config: tolerances must be an object");
    cfg.tol.rank = field(t, "rank", cfg.tol.rank);
    cfg.tol.tie = field(t, "tie", cfg.tol.tie);
    cfg.tol.orthogonality = field(t, "orthogonality", cfg.tol.orthogonality);
    cfg.tol.subspace = field(t, "subspace", cfg.tol.subspace);
    cfg.tol.condition = field(t, "condition", cfg.tol.condition);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

ordered_json config_json(const ExperimentConfig& cfg, bool with_output) {
  ordered_json j;
  j["m"] = cfg.m;
  j["n"] = cfg.n;
  j["s"] = cfg.s;
  j["kind"] = to_string(cfg.kind);
  j["p"] = cfg.p;
  j["gammas"] = cfg.gammas;
  j["algorithms"] = cfg.algorithms;
  j["seeds"] = cfg.seeds;
  j["deltas"] = cfg.deltas;
  j["tolerances"] = {{"rank", cfg.tol.rank},
                     {"tie", cfg.tol.tie},
                     {"orthogonality", cfg.tol.orthogonality},
                     {"subspace", cfg.tol.subspace},
                     {"condition", cfg.tol.condition}};
  if (with_output) j["output"] = cfg.output;
  j["max_iters"] = cfg.max_iters;
  j["stop_gap"] = cfg.stop_gap;
  j["strategy"] = to_string(cfg.strategy);
  j["angle_samples"] = cfg.angle_samples;
  j["max_reseeds"] = cfg.max_reseeds;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg, true).dump(2); }

Instance generate_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng = make_rng(seed, 1);
  Eigen::VectorXd sigma(cfg.s);
  for (int i = 0; i < cfg.s; ++i) sigma(i) = uniform(1.0, 2.0, rng);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  Matrix x_star = planted_matrix(cfg.m, cfg.n, sigma, rng);

  Rng crng = make_rng(seed, 2);
  if (cfg.kind == ConstraintKind::affine) {
    const int p = cfg.effective_p();
    std::vector<Matrix> maps;
    Eigen::VectorXd rhs(p);
    maps.reserve(p);
    for (int i = 0; i < p; ++i) {
      maps.push_back(gaussian_matrix(cfg.m, cfg.n, crng));
      rhs(i) = trace_inner(maps.back(), x_star);
    }
    return {seed, x_star, AffineConstraint(std::move(maps), rhs)};
  }
  const Eigen::Index big_n = static_cast<Eigen::Index>(cfg.m) * cfg.n;
  Eigen::MatrixXd q = random_orthogonal(big_n, crng);
  Eigen::VectorXd moduli = (q * x_star.vec()).cwiseAbs();
  return {seed, x_star, MagnitudeConstraint(std::move(q), std::move(moduli), cfg.m, cfg.n)};
}

Matrix start_point(const Instance& inst, int s, double delta, std::uint64_t seed, int delta_index) {
  Rng rng = make_rng(seed, 1000 + static_cast<std::uint64_t>(delta_index));
  const Matrix e = random_unit_matrix(inst.x_star.rows(), inst.x_star.cols(), rng);
  RankSetSpec spec;
  spec.s = s;
  return project_rank(inst.x_star + delta * e, spec).point;
}

RegularityReport instance_regularity(const ExperimentConfig& cfg, const Instance& inst) {
  RankSetSpec spec{cfg.s, cfg.tol.tie, cfg.tol.rank};
  if (const auto* a = std::get_if<AffineConstraint>(&inst.constraint)) {
    return angle_constant(inst.x_star, spec, *a);
  }
  return angle_constant_sampled(inst.x_star, spec, std::get<MagnitudeConstraint>(inst.constraint),
                                cfg.angle_samples, inst.seed);
}

bool instance_prox_regular(const ExperimentConfig&, const Instance& inst) {
  if (const auto* mc = std::get_if<MagnitudeConstraint>(&inst.constraint)) {
    return (mc->moduli().array() > 0.0).all();
  }
  return true;
}

IterateTrace solve(const SolveRequest& req, const Constraint& c, const Matrix& x0) {
  RankSetSpec spec{req.s, req.solver.tol.tie, req.solver.tol.rank};
  spec.validate(x0.rows(), x0.cols());
  if (req.algorithm == "ap") {
    return alternating_projections(rank_projector(spec), constraint_projector(c), x0, project(c, x0), req.solver);
  }
  if (req.algorithm == "inexact-ap") {
    return inexact_alternating_projections(spec, c, x0, project(c, x0), req.solver);
  }
  if (req.algorithm == "averaged") return averaged_projections(spec, c, x0, req.solver);
  if (req.algorithm == "product-space") return product_space_ap(spec, c, x0, req.solver);
  throw ParameterError("unknown algorithm '" + req.algorithm + "'");
}

double predicted_rate(const std::string& algorithm, double c_bar, double gamma, bool prox_regular) {
  if (!(c_bar < 1.0)) return std::numeric_limits<double>::quiet_NaN();
  if (algorithm == "averaged" || algorithm == "product-space") return averaged_rate_prediction(c_bar);
  try {
    return rate_bound(c_bar, algorithm == "inexact-ap" ? gamma : 0.0, prox_regular);
  } catch (const HypothesisError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

int ExperimentLedger::fatal_errors() const {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(), [](const RunRecord& r) { return r.status == "error"; }));
}

namespace {

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_real(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

double number_or_nan(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.at(key).get<double>();
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct PreparedInstance {
  Instance inst;
  int reseeds = 0;
  RegularityReport regularity;
  bool prox_regular = true;
};

// Affine instances that fail the strong-regularity check are regenerated from a
// derived seed; the attempt count is kept in the run record.
PreparedInstance prepare_instance(const ExperimentConfig& cfg, std::uint64_t seed, std::vector<std::string>& notes) {
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t derived = attempt == 0 ? seed : seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt);
    PreparedInstance p{generate_instance(cfg, derived), attempt, {}, true};
    p.regularity = instance_regularity(cfg, p.inst);
    p.prox_regular = instance_prox_regular(cfg, p.inst);
    if (cfg.kind != ConstraintKind::affine || p.regularity.strongly_regular || attempt >= cfg.max_reseeds) {
      if (cfg.kind == ConstraintKind::affine && !p.regularity.strongly_regular) {
        notes.push_back("seed " + std::to_string(seed) + ": no strongly regular instance after " +
                        std::to_string(attempt) + " reseeds");
      }
      return p;
    }
    notes.push_back("seed " + std::to_string(seed) + ": instance " + std::to_string(derived) +
                    " not strongly regular (c_bar = " + format_real(p.regularity.c_bar) + "), reseeded");
  }
}

ordered_json regularity_json(const RegularityReport& r) {
  ordered_json j;
  j["c_bar"] = r.c_bar;
  j["angle_rad"] = r.angle_rad;
  j["strongly_regular"] = r.strongly_regular;
  j["method"] = to_string(r.method);
  j["note"] = r.note;
  return j;
}

ordered_json rate_json(const RateReport& r) {
  ordered_json j;
  j["empirical_rate"] = number_or_null(r.empirical_rate);
  j["predicted_rate"] = number_or_null(r.predicted_rate);
  j["first_k"] = r.first_k;
  j["last_k"] = r.last_k;
  j["fit_residual"] = number_or_null(r.fit_residual);
  j["compliant"] = r.compliant;
  j["notes"] = r.notes;
  return j;
}

ordered_json record_json(const RunRecord& r) {
  ordered_json j;
  j["run_id"] = r.run_id;
  j["algorithm"] = r.algorithm;
  j["gamma"] = r.gamma;
  j["seed"] = r.seed;
  j["instance_seed"] = r.instance_seed;
  j["reseeds"] = r.reseeds;
  j["delta"] = r.delta;
  j["status"] = r.status;
  if (!r.error.empty()) j["error"] = r.error;
  j["iterations"] = r.iterations;
  j["final_dist_S"] = number_or_null(r.final_dist_s);
  j["final_residual_M"] = number_or_null(r.final_residual_m);
  j["conditions_pass"] = r.conditions_pass ? ordered_json(*r.conditions_pass) : ordered_json(nullptr);
  j["fallbacks"] = r.fallbacks;
  j["regularity"] = regularity_json(r.regularity);
  j["rate"] = r.rate ? rate_json(*r.rate) : ordered_json(nullptr);
  j["trace_jsonl"] = r.trace_jsonl;
  j["trace_csv"] = r.trace_csv;
  return j;
}

RunRecord execute_run(const ExperimentConfig& cfg, const PreparedInstance& prep, const std::string& algorithm,
                      double gamma, std::uint64_t seed, double delta, int delta_index, const fs::path& trace_dir) {
  RunRecord rec;
  rec.algorithm = algorithm;
  rec.gamma = gamma;
  rec.seed = seed;
  rec.instance_seed = prep.inst.seed;
  rec.reseeds = prep.reseeds;
  rec.delta = delta;
  rec.regularity = prep.regularity;
  rec.run_id = algorithm + "_g" + short_real(gamma) + "_seed" + std::to_string(seed) + "_d" + short_real(delta);

  SolveRequest req;
  req.algorithm = algorithm;
  req.s = cfg.s;
  req.solver.gamma = algorithm == "inexact-ap" ? gamma : 0.0;
  req.solver.max_iters = cfg.max_iters;
  req.solver.stop_gap = cfg.stop_gap;
  req.solver.seed = seed;
  req.solver.inexact_strategy = algorithm == "inexact-ap" ? cfg.strategy : InexactStrategy::exact;
  req.solver.tol = cfg.tol;

  IterateTrace trace;
  try {
    trace = solve(req, prep.inst.constraint, start_point(prep.inst, cfg.s, delta, seed, delta_index));
    rec.status = trace.converged ? "converged" : "max_iters";
  } catch (const DivergenceError& e) {
    trace = e.trace();
    rec.status = "error";
    rec.error = e.what();
  } catch (const Error& e) {
    rec.status = "error";
    rec.error = e.what();
    return rec;
  }

  rec.iterations = trace.iterations();
  rec.final_dist_s = trace.final_dist_s;
  rec.final_residual_m = trace.final_residual_m;
  if (!trace.condition_log.empty()) {
    rec.conditions_pass = std::all_of(trace.condition_log.begin(), trace.condition_log.end(),
                                      [](const ConditionRecord& c) { return c.all_pass(); });
    rec.fallbacks = static_cast<int>(std::count_if(trace.condition_log.begin(), trace.condition_log.end(),
                                                   [](const ConditionRecord& c) { return c.fallback; }));
  }

  const double predicted = predicted_rate(algorithm, prep.regularity.c_bar, gamma, prep.prox_regular);
  try {
    rec.rate = fit_linear_rate(trace, std::nullopt, predicted);
  } catch (const InsufficientDataError& e) {
    RateReport r;
    r.empirical_rate = std::numeric_limits<double>::quiet_NaN();
    r.predicted_rate = predicted;
    r.fit_residual = std::numeric_limits<double>::quiet_NaN();
    r.notes.push_back(e.what());
    rec.rate = r;
  }

  TraceHeader header;
  header.run_id = rec.run_id;
  header.algorithm = algorithm;
  header.s = cfg.s;
  header.gamma = req.solver.gamma;
  header.strategy = to_string(req.solver.inexact_strategy);
  header.instance_seed = prep.inst.seed;
  header.solver_seed = seed;
  header.start_distance = delta;
  header.max_iters = cfg.max_iters;
  header.stop_gap = cfg.stop_gap;
  header.tol = cfg.tol;
  std::ostringstream jsonl;
  write_trace_jsonl(jsonl, header, trace);
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  rec.trace_jsonl = "traces/" + rec.run_id + ".jsonl";
  rec.trace_csv = "traces/" + rec.run_id + ".csv";
  write_text(trace_dir / (rec.run_id + ".jsonl"), jsonl.str());
  write_text(trace_dir / (rec.run_id + ".csv"), csv.str());
  return rec;
}

}  // namespace

std::string regularity_to_json(const RegularityReport& r) { return regularity_json(r).dump(); }
std::string rate_to_json(const RateReport& r) { return rate_json(r).dump(); }

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  write_text(tmp, content);
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

ExperimentLedger run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path out(cfg.output);
  const fs::path trace_dir = out / "traces";
  std::error_code ec;
  fs::create_directories(trace_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + trace_dir.string() + "': " + ec.message());
  write_text(out / ".write-probe", "");
  fs::remove(out / ".write-probe", ec);

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentLedger ledger;
  ledger.config = cfg;

  std::vector<PreparedInstance> instances;
  instances.reserve(cfg.seeds.size());
  for (auto seed : cfg.seeds) instances.push_back(prepare_instance(cfg, seed, ledger.notes));

  for (const auto& algorithm : cfg.algorithms) {
    for (double gamma : cfg.gammas) {
      for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
        for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
          ledger.runs.push_back(execute_run(cfg, instances[si], algorithm, gamma, cfg.seeds[si], cfg.deltas[di],
                                            static_cast<int>(di), trace_dir));
        }
      }
    }
  }

  write_file_atomic((out / "ledger.json").string(), ledger_to_json(ledger));
  ordered_json meta;
  meta["output"] = cfg.output;
  meta["started_utc"] = started;
  meta["finished_utc"] = utc_now();
  meta["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file_atomic((out / "ledger.meta.json").string(), meta.dump(2) + "\n");
  return ledger;
}

std::string ledger_to_json(const ExperimentLedger& ledger) {
  ordered_json j;
  // The output path lives in the sidecar so relocated reruns stay byte-identical.
  j["config"] = config_json(ledger.config, false);
  ordered_json runs = ordered_json::array();
  int converged = 0;
  int compliant = 0;
  for (const auto& r : ledger.runs) {
    runs.push_back(record_json(r));
    converged += r.status == "converged";
    compliant += r.status == "converged" && r.rate && r.rate->compliant;
  }
  j["runs"] = std::move(runs);
  j["notes"] = ledger.notes;
  j["summary"] = {{"runs", ledger.runs.size()},
                  {"converged", converged},
                  {"converged_and_compliant", compliant},
                  {"fatal_errors", ledger.fatal_errors()}};
  return j.dump(2) + "\n";
}

ExperimentLedger ledger_from_json(const std::string& text) {
  ExperimentLedger ledger;
  try {
    const json j = json::parse(text);
    ledger.config = parse_config(j.at("config").dump());
    ledger.notes = j.value("notes", std::vector<std::string>{});
    for (const auto& r : j.at("runs")) {
      RunRecord rec;
      rec.run_id = r.at("run_id").get<std::string>();
      rec.algorithm = r.at("algorithm").get<std::string>();
      rec.gamma = r.at("gamma").get<double>();
      rec.seed = r.at("seed").get<std::uint64_t>();
      rec.instance_seed = r.at("instance_seed").get<std::uint64_t>();
      rec.reseeds = r.at("reseeds").get<int>();
      rec.delta = r.at("delta").get<double>();
      rec.status = r.at("status").get<std::string>();
      rec.error = r.value("error", std::string{});
      rec.iterations = r.at("iterations").get<int>();
      rec.final_dist_s = number_or_nan(r, "final_dist_S");
      rec.final_residual_m = number_or_nan(r, "final_residual_M");
      if (!r.at("conditions_pass").is_null()) rec.conditions_pass = r.at("conditions_pass").get<bool>();
      rec.fallbacks = r.at("fallbacks").get<int>();
      const json& g = r.at("regularity");
      rec.regularity.c_bar = g.at("c_bar").get<double>();
      rec.regularity.angle_rad = g.at("angle_rad").get<double>();
      rec.regularity.strongly_regular = g.at("strongly_regular").get<bool>();
      rec.regularity.method = g.at("method").get<std::string>() == "sampled" ? AngleMethod::sampled
                                                                             : AngleMethod::subspace_exact;
      rec.regularity.note = g.at("note").get<std::string>();
      if (!r.at("rate").is_null()) {
        const json& q = r.at("rate");
        RateReport rate;
        rate.empirical_rate = number_or_nan(q, "empirical_rate");
        rate.predicted_rate = number_or_nan(q, "predicted_rate");
        rate.first_k = q.at("first_k").get<int>();
        rate.last_k = q.at("last_k").get<int>();
        rate.fit_residual = number_or_nan(q, "fit_residual");
        rate.compliant = q.at("compliant").get<bool>();
        rate.notes = q.at("notes").get<std::vector<std::string>>();
        rec.rate = rate;
      }
      rec.trace_jsonl = r.at("trace_jsonl").get<std::string>();
      rec.trace_csv = r.at("trace_csv").get<std::string>();
      ledger.runs.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ledger: ") + e.what());
  }
  return ledger;
}

ExperimentLedger load_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ledger '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ledger_from_json(buf.str());
}

void emit_plot_data(const ExperimentLedger& ledger, const std::string& trace_root, const std::string& out_dir) {
  if (ledger.runs.empty()) throw PreconditionError("emit_plot_data: ledger has no runs");
  const fs::path plots = fs::path(out_dir) / "plots";
  std::error_code ec;
  fs::create_directories(plots, ec);
  if (ec) throw IoError("cannot create '" + plots.string() + "': " + ec.message());

  std::ostringstream summary;
  summary << "gamma,c_bar,predicted_rate,empirical_rate\n";
  for (const auto& r : ledger.runs) {
    if (r.trace_csv.empty()) throw IoError("run " + r.run_id + ": no trace file recorded");
    const fs::path trace_path = fs::path(trace_root) / r.trace_csv;
    if (!fs::exists(trace_path)) throw IoError("run " + r.run_id + ": missing trace file '" + trace_path.string() + "'");
    const IterateTrace trace = load_trace_csv(trace_path.string());

    std::ostringstream per_run;
    per_run << "k,log_step_norm\n";
    for (const auto& row : trace.rows) {
      if (row.step_norm > 0.0) per_run << row.k << ',' << format_real(std::log(row.step_norm)) << '\n';
    }
    write_text(plots / (r.run_id + ".csv"), per_run.str());

    const double predicted = r.rate ? r.rate->predicted_rate : std::numeric_limits<double>::quiet_NaN();
    double empirical = std::numeric_limits<double>::quiet_NaN();
    try {
      empirical = fit_linear_rate(trace, std::nullopt, predicted).empirical_rate;
    } catch (const InsufficientDataError&) {
    }
    summary << format_real(r.gamma) << ',' << format_real(r.regularity.c_bar) << ',' << format_real(predicted) << ','
            << format_real(empirical) << '\n';
  }
  write_text(plots / "summary.csv", summary.str());
}

}  // namespace rankfeas
