#pragma once

#include "rankfeas/algorithms.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace rankfeas {

/// Run parameters written at the head of every trace record.
struct TraceHeader {
  std::string run_id;
  std::string algorithm;
  int s = 0;
  double gamma = 0.0;
  std::string strategy = "exact";
  std::uint64_t instance_seed = 0;
  std::uint64_t solver_seed = 0;
  double start_distance = 0.0;
  int max_iters = 0;
  double stop_gap = 0.0;
  Tolerances tol{};
};

/// Column names of the per-iteration CSV, in order.
inline constexpr const char* kTraceCsvHeader = "k,step_norm,dist_S,residual_M,cond_a,cond_b,cond_c,d_NM";

/// Line-delimited JSON: one "header" record, one "iteration" record per row, one "final" record.
void write_trace_jsonl(std::ostream& out, const TraceHeader& header, const IterateTrace& trace);
void write_trace_csv(std::ostream& out, const IterateTrace& trace);

/// Rebuilds rows (and condition flags) from a CSV written by write_trace_csv.
/// Iterates and the final point are not stored in CSV; final_point is left 1 x 1.
IterateTrace read_trace_csv(std::istream& in);
IterateTrace load_trace_csv(const std::string& path);

}  // namespace rankfeas
