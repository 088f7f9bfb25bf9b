#include "rankfeas/trace_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace rankfeas {

using nlohmann::ordered_json;

namespace {

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json flag_or_null(const std::optional<ConditionRecord>& c, bool ConditionRecord::*field) {
  return c ? ordered_json((*c).*field) : ordered_json(nullptr);
}

std::string format_real(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

void write_trace_jsonl(std::ostream& out, const TraceHeader& header, const IterateTrace& trace) {
  ordered_json head;
  head["record"] = "header";
  head["run_id"] = header.run_id;
  head["algorithm"] = header.algorithm;
  head["parameters"] = {{"s", header.s},
                        {"gamma", header.gamma},
                        {"strategy", header.strategy},
                        {"instance_seed", header.instance_seed},
                        {"solver_seed", header.solver_seed},
                        {"start_distance", header.start_distance},
                        {"max_iters", header.max_iters},
                        {"stop_gap", header.stop_gap},
                        {"tolerances",
                         {{"rank", header.tol.rank},
                          {"tie", header.tol.tie},
                          {"orthogonality", header.tol.orthogonality},
                          {"subspace", header.tol.subspace},
                          {"condition", header.tol.condition}}}};
  out << head.dump() << '\n';

  for (const auto& row : trace.rows) {
    ordered_json rec;
    rec["record"] = "iteration";
    rec["run_id"] = header.run_id;
    rec["k"] = row.k;
    rec["step_norm"] = number_or_null(row.step_norm);
    rec["dist_S"] = number_or_null(row.dist_s);
    rec["residual_M"] = number_or_null(row.residual_m);
    rec["cond_a"] = flag_or_null(row.conditions, &ConditionRecord::step_monotone);
    rec["cond_b"] = flag_or_null(row.conditions, &ConditionRecord::coincidence);
    rec["cond_c"] = flag_or_null(row.conditions, &ConditionRecord::cone_distance);
    rec["d_NM"] = row.conditions ? number_or_null(row.conditions->d_nm) : ordered_json(nullptr);
    out << rec.dump() << '\n';
  }

  ordered_json fin;
  fin["record"] = "final";
  fin["run_id"] = header.run_id;
  fin["status"] = trace.converged ? "converged" : "max_iters";
  fin["iterations"] = trace.iterations();
  fin["final_dist_S"] = number_or_null(trace.final_dist_s);
  fin["final_residual_M"] = number_or_null(trace.final_residual_m);
  fin["fallbacks"] = std::count_if(trace.condition_log.begin(), trace.condition_log.end(),
                                   [](const ConditionRecord& c) { return c.fallback; });
  fin["notes"] = trace.notes;
  out << fin.dump() << '\n';
}

void write_trace_csv(std::ostream& out, const IterateTrace& trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& row : trace.rows) {
    out << row.k << ',' << format_real(row.step_norm) << ',' << format_real(row.dist_s) << ','
        << format_real(row.residual_m) << ',';
    if (row.conditions) {
      const auto& c = *row.conditions;
      out << int(c.step_monotone) << ',' << int(c.coincidence) << ',' << int(c.cone_distance) << ','
          << format_real(c.d_nm);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("trace csv: bad number '" + s + "'");
  return v;
}

}  // namespace

IterateTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw ConfigError("trace csv: unexpected header '" + line + "'");
  }
  IterateTrace trace;
  trace.algorithm = "csv";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw ConfigError("trace csv: expected 8 fields in '" + line + "'");
    IterateRecord row;
    row.k = static_cast<int>(parse_real(f[0]));
    row.step_norm = parse_real(f[1]);
    row.dist_s = parse_real(f[2]);
    row.residual_m = parse_real(f[3]);
    if (!f[4].empty()) {
      ConditionRecord c;
      c.iterate = row.k + 1;
      c.step_monotone = f[4] == "1";
      c.coincidence = f[5] == "1";
      c.cone_distance = f[6] == "1";
      c.d_nm = parse_real(f[7]);
      row.conditions = c;
      trace.condition_log.push_back(c);
    }
    trace.rows.push_back(row);
  }
  return trace;
}

IterateTrace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace '" + path + "'");
  return read_trace_csv(in);
}

}  // namespace rankfeas
