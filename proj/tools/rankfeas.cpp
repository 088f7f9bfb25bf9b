// Command-line front end: instance generation, single solves, diagnostics and batch experiments.

#include "rankfeas/experiment.hpp"
#include "rankfeas/trace_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace rankfeas;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct GenerateArgs {
  std::string config;
  int m = 20, n = 20, s = 3, p = 60;
  std::string kind = "affine";
  std::uint64_t seed = 0;
  double delta = 0.05;
  std::string out = ".";
};

struct SolveArgs {
  std::string constraint, start, out = ".", run_id = "run";
  std::string algorithm = "ap", strategy = "perturbed";
  int s = 1;
  double gamma = 0.0;
  int max_iters = 10000;
  double stop_gap = 1e-10;
  std::uint64_t seed = 0;
};

struct AngleArgs {
  std::string constraint, base;
  int s = 1;
  int samples = 64;
  std::uint64_t seed = 0;
};

struct RateArgs {
  std::string trace;
  double predicted = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentArgs {
  std::string config, out;
};

struct PlotArgs {
  std::string ledger, out, trace_root;
};

int run_generate(const GenerateArgs& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
  } else {
    cfg.m = a.m;
    cfg.n = a.n;
    cfg.s = a.s;
    cfg.p = a.p;
    cfg.kind = parse_constraint_kind(a.kind);
    cfg.validate();
  }
  const Instance inst = generate_instance(cfg, a.seed);
  const fs::path out(a.out);
  fs::create_directories(out);
  save_matrix((out / "x_star.txt").string(), inst.x_star);
  save_constraint((out / "constraint.txt").string(), inst.constraint);
  save_matrix((out / "start.txt").string(), start_point(inst, cfg.s, a.delta, a.seed, 0));
  std::cout << "wrote " << kind_name(inst.constraint) << " instance (seed " << a.seed << ") to " << out.string()
            << "\n";
  return 0;
}

int run_solve(const SolveArgs& a) {
  const Constraint c = load_constraint(a.constraint);
  const Matrix x0 = load_matrix(a.start);
  SolveRequest req;
  req.algorithm = a.algorithm;
  req.s = a.s;
  req.solver.gamma = a.gamma;
  req.solver.max_iters = a.max_iters;
  req.solver.stop_gap = a.stop_gap;
  req.solver.seed = a.seed;
  req.solver.inexact_strategy = a.algorithm == "inexact-ap" ? parse_strategy(a.strategy) : InexactStrategy::exact;
  req.solver.validate();
  const IterateTrace trace = solve(req, c, x0);

  TraceHeader header;
  header.run_id = a.run_id;
  header.algorithm = a.algorithm;
  header.s = a.s;
  header.gamma = a.gamma;
  header.strategy = to_string(req.solver.inexact_strategy);
  header.solver_seed = a.seed;
  header.max_iters = a.max_iters;
  header.stop_gap = a.stop_gap;
  const fs::path out(a.out);
  fs::create_directories(out);
  std::ostringstream jsonl, csv;
  write_trace_jsonl(jsonl, header, trace);
  write_trace_csv(csv, trace);
  write_file_atomic((out / (a.run_id + ".jsonl")).string(), jsonl.str());
  write_file_atomic((out / (a.run_id + ".csv")).string(), csv.str());
  save_matrix((out / (a.run_id + ".final.txt")).string(), trace.final_point);
  std::cout << a.run_id << ": " << (trace.converged ? "converged" : "max_iters") << " after "
            << trace.iterations() << " iterations\n";
  return 0;
}

int run_angle(const AngleArgs& a) {
  const Constraint c = load_constraint(a.constraint);
  const Matrix base = load_matrix(a.base);
  RankSetSpec spec;
  spec.s = a.s;
  const RegularityReport r = std::holds_alternative<AffineConstraint>(c)
                                 ? angle_constant(base, spec, std::get<AffineConstraint>(c))
                                 : angle_constant_sampled(base, spec, std::get<MagnitudeConstraint>(c), a.samples, a.seed);
  std::cout << regularity_to_json(r) << "\n";
  return 0;
}

int run_rate(const RateArgs& a) {
  const IterateTrace trace = load_trace_csv(a.trace);
  std::cout << rate_to_json(fit_linear_rate(trace, std::nullopt, a.predicted)) << "\n";
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = load_config(a.config);
  if (!a.out.empty()) cfg.output = a.out;
  const ExperimentLedger ledger = run_experiment(cfg);
  int converged = 0;
  for (const auto& r : ledger.runs) converged += r.status == "converged";
  std::cout << ledger.runs.size() << " runs, " << converged << " converged, " << ledger.fatal_errors()
            << " errors; ledger at " << (fs::path(cfg.output) / "ledger.json").string() << "\n";
  return ledger.fatal_errors() > 0 ? kExitNumerical : 0;
}

int run_plots(const PlotArgs& a) {
  const ExperimentLedger ledger = load_ledger(a.ledger);
  const std::string base = fs::path(a.ledger).parent_path().string();
  const std::string root = a.trace_root.empty() ? (base.empty() ? "." : base) : a.trace_root;
  const std::string out = a.out.empty() ? root : a.out;
  emit_plot_data(ledger, root, out);
  std::cout << "wrote " << ledger.runs.size() << " plot series to " << (fs::path(out) / "plots").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alternating-projection solvers for rank-constrained feasibility problems"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a planted instance (x_star.txt, constraint.txt, start.txt)");
  g->add_option("--config", gen.config, "experiment config to take dimensions from");
  g->add_option("--m", gen.m);
  g->add_option("--n", gen.n);
  g->add_option("--s", gen.s);
  g->add_option("--p", gen.p, "number of affine measurements");
  g->add_option("--kind", gen.kind)->check(CLI::IsMember({"affine", "magnitude"}));
  g->add_option("--seed", gen.seed);
  g->add_option("--delta", gen.delta, "start distance for start.txt");
  g->add_option("--out", gen.out);

  SolveArgs sol;
  auto* so = app.add_subcommand("solve", "run one solver from instance files");
  so->add_option("--constraint", sol.constraint)->required();
  so->add_option("--start", sol.start)->required();
  so->add_option("--algorithm", sol.algorithm)->check(CLI::IsMember(kAlgorithmNames));
  so->add_option("--s", sol.s)->required();
  so->add_option("--gamma", sol.gamma);
  so->add_option("--strategy", sol.strategy)->check(CLI::IsMember({"exact", "perturbed", "truncated_inner"}));
  so->add_option("--max-iters", sol.max_iters);
  so->add_option("--stop-gap", sol.stop_gap);
  so->add_option("--seed", sol.seed);
  so->add_option("--run-id", sol.run_id);
  so->add_option("--out", sol.out);

  AngleArgs ang;
  auto* an = app.add_subcommand("angle", "print the regularity report at a base point");
  an->add_option("--constraint", ang.constraint)->required();
  an->add_option("--base", ang.base)->required();
  an->add_option("--s", ang.s)->required();
  an->add_option("--samples", ang.samples, "sampled normals for magnitude sets");
  an->add_option("--seed", ang.seed);

  RateArgs rate;
  auto* ra = app.add_subcommand("rate", "fit the linear rate of a trace CSV");
  ra->add_option("--trace", rate.trace)->required();
  ra->add_option("--predicted", rate.predicted);

  ExperimentArgs exp;
  auto* ex = app.add_subcommand("experiment", "run a config file and write the ledger");
  ex->add_option("--config", exp.config)->required();
  ex->add_option("--out", exp.out, "override the config's output directory");

  PlotArgs plot;
  auto* pl = app.add_subcommand("emit-plots", "write plot-ready CSVs for a ledger");
  pl->add_option("--ledger", plot.ledger)->required();
  pl->add_option("--out", plot.out, "defaults to the ledger's directory");
  pl->add_option("--trace-root", plot.trace_root, "defaults to the ledger's directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*g) return run_generate(gen);
    if (*so) return run_solve(sol);
    if (*an) return run_angle(ang);
    if (*ra) return run_rate(rate);
    if (*ex) return run_experiment_cmd(exp);
    if (*pl) return run_plots(plot);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
