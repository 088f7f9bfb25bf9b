// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "rankfeas/algorithms.hpp"
#include "rankfeas/constraint_sets.hpp"
#include "rankfeas/diagnostics.hpp"
#include "rankfeas/errors.hpp"
#include "rankfeas/experiment.hpp"
#include "rankfeas/random.hpp"
#include "rankfeas/rank_set.hpp"
#include "rankfeas/svd.hpp"

#include "support.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace rankfeas;
using testing_support::planted;
using testing_support::seeded_gaussian;
using testing_support::seeded_orthogonal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Settings {
  std::string cli;
  std::string demo;
  fs::path work;
};

RankSetSpec spec_s(int s) {
  RankSetSpec spec;
  spec.s = s;
  return spec;
}

Eigen::VectorXd vec_of(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Singular values from the eigenvalues of x^T x (or x x^T), not from the library SVD.
Eigen::VectorXd gram_singular_values(const Matrix& x) {
  const Eigen::MatrixXd a = x.rows() >= x.cols() ? Eigen::MatrixXd(x.eigen().transpose() * x.eigen())
                                                 : Eigen::MatrixXd(x.eigen() * x.eigen().transpose());
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return ev.cwiseMax(0.0).cwiseSqrt();
}

// Matrices with generic spectra, exact ties, near ties on both sides of the band,
// and rank deficiency.
std::vector<Matrix> spectral_corpus() {
  std::vector<Matrix> corpus;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    corpus.emplace_back(seeded_gaussian(6, 5, seed));
    corpus.push_back(planted(6, 5, vec_of({3, 2, 2, 1, 0.5}), seed));
    corpus.push_back(planted(6, 5, vec_of({2, 2, 2, 0, 0}), seed));
    corpus.push_back(planted(6, 5, vec_of({1, 0, 0, 0, 0}), seed));
    corpus.push_back(planted(6, 5, vec_of({1, 1, 1, 1, 1}), seed));
    corpus.push_back(planted(6, 5, vec_of({3, 1 + 1e-10, 1, 0.2, 0}), seed));
    corpus.push_back(planted(6, 5, vec_of({3, 1 + 1e-6, 1, 0.2, 0}), seed));
  }
  corpus.push_back(Matrix::diagonal({1, 0, 0}));
  corpus.push_back(Matrix(4, 3));
  return corpus;
}

Outcome criterion1() {
  int mismatches = 0, beaten = 0, total = 0;
  double worst_rel = 0.0;
  Rng rng = make_rng(2024, 1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix x(seeded_gaussian(10, 8, 31 + seed));
    const Eigen::VectorXd sv = gram_singular_values(x);
    for (int s : {1, 3, 5}) {
      ++total;
      const Matrix p = project_rank(x, spec_s(s)).point;
      const double d2 = std::pow(distance(x, p), 2);
      const double tail = sv.tail(sv.size() - s).squaredNorm();
      const double rel = std::abs(d2 - tail) / std::max(tail, 1e-300);
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-8) ++mismatches;
      for (int t = 0; t < 200; ++t) {
        Matrix cand(10, 8);
        if (t % 2 == 0) {
          cand = Matrix(Eigen::MatrixXd(gaussian(10, s, rng) * gaussian(s, 8, rng)));
        } else {
          // Best fit of x inside a random s-dimensional row space.
          const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(8, s, rng));
          const Eigen::MatrixXd v = Eigen::MatrixXd(qr.householderQ()).leftCols(s);
          cand = Matrix(Eigen::MatrixXd(x.eigen() * v * v.transpose()));
        }
        if (distance(x, cand) < distance(x, p) - 1e-12) {
          ++beaten;
          break;
        }
      }
    }
  }
  return {mismatches == 0 && beaten == 0, std::to_string(total) + " cases, worst relative tail gap " +
                                             fmt("%.2e", worst_rel) + ", beaten by a candidate " +
                                             std::to_string(beaten)};
}

// Nearest points of S found by keeping every s-subset of the singular triplets.
// Returns how many pairwise-distinct minimizers appear.
int distinct_minimizers(const Matrix& x, int s, double tie_tol) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(x.eigen(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const int r = static_cast<int>(sv.size());
  const double sigma1 = r > 0 ? sv(0) : 0.0;
  std::vector<std::pair<double, Matrix>> cands;
  std::vector<bool> keep(r, false);
  std::fill(keep.begin(), keep.begin() + s, true);
  std::sort(keep.begin(), keep.end());
  do {
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    double d2 = 0.0;
    for (int i = 0; i < r; ++i) {
      if (keep[i]) {
        y += sv(i) * svd.matrixU().col(i) * svd.matrixV().col(i).transpose();
      } else {
        d2 += sv(i) * sv(i);
      }
    }
    cands.emplace_back(d2, Matrix(y));
  } while (std::next_permutation(keep.begin(), keep.end()));
  double best = 1e300;
  for (const auto& c : cands) best = std::min(best, c.first);
  const double band = 2.0 * tie_tol * std::max(1.0, sigma1) * std::max(sigma1, 1e-300) + 1e-14;
  std::vector<Matrix> distinct;
  for (const auto& c : cands) {
    if (c.first > best + band) continue;
    const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](const Matrix& d) { return distance(d, c.second) <= 1e-6; });
    if (!seen) distinct.push_back(c.second);
  }
  return static_cast<int>(distinct.size());
}

Outcome criterion2() {
  int disagreements = 0, cases = 0, multivalued = 0;
  for (const Matrix& x : spectral_corpus()) {
    const int r = static_cast<int>(std::min(x.rows(), x.cols()));
    for (int s = 0; s <= r; ++s) {
      ++cases;
      const bool flag = project_rank(x, spec_s(s)).multivalued;
      multivalued += flag;
      if (flag != (distinct_minimizers(x, s, Tolerances{}.tie) >= 2)) ++disagreements;
    }
  }
  return {disagreements == 0, std::to_string(cases) + " cases (" + std::to_string(multivalued) +
                                  " multivalued), disagreements " + std::to_string(disagreements)};
}

Outcome criterion3() {
  int v[4] = {0, 0, 0, 0};
  int cases = 0, ii_positive_alpha = 0;
  for (const Matrix& x : spectral_corpus()) {
    const int r = static_cast<int>(std::min(x.rows(), x.cols()));
    const int rank = numeric_rank(x);
    if (!alpha_s(x, 0).is_infinite()) ++v[0];
    for (int s = 0; s <= r; ++s) {
      ++cases;
      const ExtendedReal a = alpha_s(x, s);
      const int j = static_cast<int>(j_set(x, a).size());
      if (j > s && !(rank > s && s > 0)) {
        ++v[1];
        if (a.is_infinite() || a.value() > 0.0) ++ii_positive_alpha;
      }
      if (rank > s && !(a.is_infinite() || a.value() > 0.0)) ++v[2];
      if (rank < s && s <= r && !(!a.is_infinite() && a.value() == 0.0)) ++v[3];
    }
  }
  const int total = v[0] + v[1] + v[2] + v[3];
  return {total == 0, std::to_string(cases) + " cases, violations (i) " + std::to_string(v[0]) + " (ii) " +
                          std::to_string(v[1]) + " (iii) " + std::to_string(v[2]) + " (iv) " + std::to_string(v[3]) +
                          (v[1] > 0 ? "; (ii) violations with alpha_s > 0: " + std::to_string(ii_positive_alpha) +
                                           " (rank < s gives alpha_s = 0, which puts every index in J)"
                                     : "")};
}

Outcome criterion4() {
  int stated_fail = 0, span_fail = 0, samples = 0;
  double worst = 0.0;
  for (std::uint64_t b = 0; b < 10; ++b) {
    const Matrix base = planted(6, 5, vec_of({2.5, 1.5}), 500 + b);
    const auto basis = normal_subspace_basis(base, spec_s(2));
    for (std::uint64_t t = 0; t < 100; ++t) {
      ++samples;
      const Matrix v = sample_proximal_normal(base, spec_s(2), b * 1000 + t);
      if (!stated_normal_cone_member({base, v}, spec_s(2))) ++stated_fail;
      const Matrix unit = (1.0 / fro_norm(v)) * v;
      Matrix rest = unit;
      for (const auto& g : basis) rest = rest - trace_inner(g, unit) * g;
      worst = std::max(worst, fro_norm(rest));
      if (fro_norm(rest) > 1e-8) ++span_fail;
    }
  }
  // Below rank s only v = 0 survives the projection round trip.
  int deficient_fail = 0;
  Rng rng = make_rng(77, 4);
  for (const Matrix& base : {Matrix::diagonal({1, 0, 0}), planted(6, 5, vec_of({2, 1}), 9)}) {
    const int s = base.rows() == 3 ? 2 : 3;
    if (distance(project_rank(base, spec_s(s)).point, base) > 1e-12) ++deficient_fail;
    for (int t = 0; t < 100; ++t) {
      const Matrix dir = random_unit_matrix(base.rows(), base.cols(), rng);
      for (double step : {1e-3, 1e-1}) {
        if (distance(project_rank(base + step * dir, spec_s(s)).point, base) <= 1e-9) ++deficient_fail;
      }
    }
  }
  const bool pass = stated_fail == 0 && span_fail == 0 && deficient_fail == 0;
  return {pass, std::to_string(samples) + " normals, stated-test failures " + std::to_string(stated_fail) +
                    ", worst span residual " + fmt("%.2e", worst) + ", nonzero normals certified below rank " +
                    std::to_string(deficient_fail)};
}

Outcome criterion5() {
  int multivalued = 0, samples = 0;
  Rng rng = make_rng(55, 5);
  for (std::uint64_t b = 0; b < 50; ++b) {
    const Matrix base = planted(8, 7, vec_of({1 + uniform(0, 2, rng), 1 + uniform(0, 1, rng), uniform(0.2, 1, rng)}),
                                900 + b);
    const double radius = prox_regularity_certificate(base, spec_s(3));
    for (int t = 0; t < 50; ++t) {
      ++samples;
      const Matrix x = base + (radius * uniform(0, 1, rng)) * random_unit_matrix(8, 7, rng);
      if (project_rank(x, spec_s(3)).multivalued || enumerate_projection_representatives(x, spec_s(3), 2).size() > 1)
        ++multivalued;
    }
  }
  return {multivalued == 0, std::to_string(samples) + " samples, multivalued " + std::to_string(multivalued)};
}

Outcome criterion6() {
  double worst = 0.0;
  int length_mismatch = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ExperimentConfig cfg;
    cfg.m = 6;
    cfg.n = 5;
    cfg.s = 2;
    cfg.p = 12;
    const Instance inst = generate_instance(cfg, 300 + seed);
    const Matrix x0 = start_point(inst, cfg.s, 0.1, seed, 0);
    SolverConfig sc;
    sc.max_iters = 300;
    sc.keep_iterates = true;
    const IterateTrace a = averaged_projections(spec_s(2), inst.constraint, x0, sc);
    const IterateTrace b = product_space_ap(spec_s(2), inst.constraint, x0, sc);
    if (a.iterates.size() != b.iterates.size()) ++length_mismatch;
    for (std::size_t k = 0; k < std::min(a.iterates.size(), b.iterates.size()); ++k)
      worst = std::max(worst, testing_support::max_abs_diff(a.iterates[k], b.iterates[k]));
  }
  return {worst <= 1e-12 && length_mismatch == 0,
          "20 instances, worst stepwise difference " + fmt("%.2e", worst) + ", length mismatches " +
              std::to_string(length_mismatch)};
}

ExperimentConfig planted_affine_config(const fs::path& out, int seeds) {
  ExperimentConfig cfg;
  cfg.m = cfg.n = 20;
  cfg.s = 3;
  cfg.p = 60;
  cfg.deltas = {0.05};
  cfg.seeds.clear();
  for (int i = 0; i < seeds; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  cfg.output = out.string();
  return cfg;
}

ExperimentLedger criterion7_ledger;

Outcome criterion7(const Settings& st) {
  const ExperimentConfig cfg = planted_affine_config(st.work / "exact", 100);
  criterion7_ledger = run_experiment(cfg);
  int good = 0;
  double worst_margin = -1e300;
  for (const auto& r : criterion7_ledger.runs) {
    if (r.status != "converged" || !r.rate) continue;
    const double margin = r.rate->empirical_rate - r.regularity.c_bar;
    worst_margin = std::max(worst_margin, margin);
    if (margin <= kRateSlack) ++good;
  }
  return {good >= 95, std::to_string(good) + "/100 converged with rate <= c_bar + 0.05 (largest rate - c_bar " +
                          fmt("%.3f", worst_margin) + ")"};
}

Outcome criterion8(const Settings& st) {
  ExperimentConfig cfg = planted_affine_config(st.work / "inexact", 100);
  cfg.algorithms = {"inexact-ap"};
  cfg.gammas = {0.1, 0.3};
  cfg.strategy = InexactStrategy::perturbed;
  const ExperimentLedger ledger = run_experiment(cfg);
  int cond_fail = 0, within = 0, hypothesis_fail = 0;
  for (const auto& r : ledger.runs) {
    if (!r.conditions_pass.value_or(false)) ++cond_fail;
    const double c = r.regularity.c_bar, g = r.gamma;
    if (g >= std::sqrt(std::max(0.0, 1 - c * c))) ++hypothesis_fail;
    const double bound = c * std::sqrt(1 - g * g) + g * std::sqrt(std::max(0.0, 1 - c * c));
    if (r.rate && r.rate->empirical_rate <= bound + kRateSlack) ++within;
  }
  const int n = static_cast<int>(ledger.runs.size());
  const bool pass = cond_fail == 0 && within * 10 >= 9 * n;
  return {pass, std::to_string(n) + " runs, condition failures " + std::to_string(cond_fail) + ", within bound " +
                    std::to_string(within) + ", hypothesis gamma < sqrt(1-c^2) violated in " +
                    std::to_string(hypothesis_fail)};
}

Outcome criterion9() {
  const Matrix base = Matrix::diagonal({1, 0});
  Eigen::MatrixXd e22 = Eigen::MatrixXd::Zero(2, 2);
  e22(1, 1) = 1;
  Eigen::VectorXd b(1);
  b << 0.0;
  const AffineConstraint m({Matrix(e22)}, b);
  const RegularityReport reg = angle_constant(base, spec_s(1), m);
  double min_rate = 1e300;
  int fits = 0;
  Rng rng = make_rng(9, 9);
  for (int t = 0; t < 10; ++t) {
    const Matrix x0 = project_rank(base + 0.01 * random_unit_matrix(2, 2, rng), spec_s(1)).point;
    SolveRequest req;
    req.s = 1;
    const IterateTrace trace = solve(req, m, x0);
    try {
      min_rate = std::min(min_rate, fit_linear_rate(trace).empirical_rate);
      ++fits;
    } catch (const InsufficientDataError&) {
    }
  }
  const bool pass = reg.c_bar == 1.0 && !reg.strongly_regular && fits > 0 && min_rate >= 0.99;
  return {pass, "c_bar " + fmt("%.17g", reg.c_bar) + ", strongly_regular " +
                    (reg.strongly_regular ? "true" : "false") + ", " + std::to_string(fits) +
                    " fitted runs, smallest rate " + fmt("%.5f", min_rate)};
}

Outcome criterion10(const Settings& st) {
  ExperimentConfig cfg;
  cfg.m = cfg.n = 4;
  cfg.s = 1;
  cfg.kind = ConstraintKind::magnitude;
  cfg.deltas = {0.05};
  cfg.seeds.clear();
  for (std::uint64_t i = 0; i < 20; ++i) cfg.seeds.push_back(i);
  cfg.output = (st.work / "magnitude").string();
  const ExperimentLedger ledger = run_experiment(cfg);
  int good = 0;
  std::string failures;
  for (const auto& r : ledger.runs) {
    const bool small = r.status == "converged" && r.final_dist_s <= 1e-7 && r.final_residual_m <= 1e-7;
    // Too few rows to fit (NaN rate) means the run terminated in finitely many steps.
    const bool linear = !r.rate || std::isnan(r.rate->empirical_rate) || r.rate->empirical_rate < 1.0;
    if (small && linear) {
      ++good;
    } else {
      const Instance inst = generate_instance(cfg, r.instance_seed);
      const Matrix x0 = start_point(inst, cfg.s, r.delta, r.seed, 0);
      std::cerr << "  basin: " << r.run_id << " status " << r.status << " dist_S " << r.final_dist_s
                << " residual_M " << r.final_residual_m << " start-to-x* " << distance(x0, inst.x_star)
                << " c_bar(sampled) " << r.regularity.c_bar << "\n";
      failures += failures.empty() ? r.run_id : "," + r.run_id;
    }
  }
  return {good * 10 >= 8 * static_cast<int>(ledger.runs.size()),
          std::to_string(good) + "/" + std::to_string(ledger.runs.size()) + " reached both residuals <= 1e-7" +
              (failures.empty() ? "" : " (failed: " + failures + ")")};
}

int run_cli(const Settings& st, const std::string& args, std::string* out = nullptr) {
  const std::string cmd = "\"" + st.cli + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "ledger.meta.json") continue;
    files[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return files;
}

// One full CLI pass into `dir`; returns a problem description or "".
std::string cli_pass(const Settings& st, const fs::path& dir, std::vector<std::vector<double>>* summary) {
  fs::remove_all(dir);
  const std::string q = "\"" + dir.string() + "\"";
  if (run_cli(st, "experiment --config \"" + st.demo + "\" --out " + q + "/experiment") != 0) return "experiment failed";
  if (run_cli(st, "emit-plots --ledger " + q + "/experiment/ledger.json") != 0) return "emit-plots failed";
  const ExperimentLedger ledger = load_ledger((dir / "experiment" / "ledger.json").string());
  for (const auto& r : ledger.runs) {
    const std::string seed = std::to_string(r.seed);
    const std::string d = q + "/manual/seed" + seed;
    if (run_cli(st, "generate --config \"" + st.demo + "\" --seed " + std::to_string(r.instance_seed) + " --delta 0.05 --out " + d) != 0)
      return "generate failed for seed " + seed;
    if (run_cli(st, "solve --constraint " + d + "/constraint.txt --start " + d + "/start.txt --s 3 --run-id " +
                        r.run_id + " --out " + d) != 0)
      return "solve failed for seed " + seed;
    std::string text;
    if (run_cli(st, "rate --trace " + d + "/" + r.run_id + ".csv --predicted " + fmt("%.17g", r.regularity.c_bar),
                &text) != 0)
      return "rate failed for seed " + seed;
    std::ofstream(dir / "manual" / ("seed" + seed) / "rate.json") << text;
    if (r.reseeds == 0 && r.rate) {
      const double cli_rate = nlohmann::json::parse(text).at("empirical_rate").get<double>();
      if (std::abs(cli_rate - r.rate->empirical_rate) > 1e-12) return "rate mismatch for seed " + seed;
    }
  }
  std::istringstream in(slurp(dir / "experiment" / "plots" / "summary.csv"));
  std::string line;
  std::getline(in, line);
  if (line != "gamma,c_bar,predicted_rate,empirical_rate") return "summary header " + line;
  summary->clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    summary->push_back(row);
  }
  return "";
}

Outcome criterion11(const Settings& st) {
  std::vector<std::vector<double>> first, second;
  const std::string p1 = cli_pass(st, st.work / "cli-a", &first);
  if (!p1.empty()) return {false, p1};
  const std::string p2 = cli_pass(st, st.work / "cli-b", &second);
  if (!p2.empty()) return {false, p2};
  const bool identical = tree_contents(st.work / "cli-a") == tree_contents(st.work / "cli-b");

  // The demo seeds are the first seeds of the exact-case experiment.
  const ExperimentLedger demo = load_ledger((st.work / "cli-a" / "experiment" / "ledger.json").string());
  int matched = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < demo.runs.size() && i < first.size(); ++i) {
    for (const auto& r : criterion7_ledger.runs) {
      if (r.run_id != demo.runs[i].run_id) continue;
      const double emp = r.rate ? r.rate->empirical_rate : std::nan("");
      worst = std::max({worst, std::abs(first[i][1] - r.regularity.c_bar), std::abs(first[i][3] - emp)});
      ++matched;
    }
  }
  const bool pass = identical && matched == static_cast<int>(demo.runs.size()) && !demo.runs.empty() && worst <= 1e-12;
  return {pass, std::to_string(matched) + " summary rows matched the exact-case runs (worst difference " +
                    fmt("%.2e", worst) + "), second pass " + (identical ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main(int argc, char** argv) {
  Settings st;
  std::string work;
  CLI::App app{"acceptance checks"};
  app.add_option("--cli", st.cli, "path to the rankfeas executable")->required();
  app.add_option("--demo", st.demo, "demo experiment config")->required();
  app.add_option("--workdir", work, "scratch directory")->required();
  CLI11_PARSE(app, argc, argv);
  st.work = work;
  fs::remove_all(st.work);
  fs::create_directories(st.work);

  struct Criterion {
    int id;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 5, criterion1},
      {2, 5, criterion2},
      {3, 0, criterion3},
      {4, 10, criterion4},
      {5, 10, criterion5},
      {6, 0, criterion6},
      {7, 60, [&] { return criterion7(st); }},
      {8, 120, [&] { return criterion8(st); }},
      {9, 0, criterion9},
      {10, 0, [&] { return criterion10(st); }},
      {11, 0, [&] { return criterion11(st); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%g", c.budget_s) + " s budget";
    }
    failed += !o.pass;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << fmt("%.2f", secs) << " s) "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
