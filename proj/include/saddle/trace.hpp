#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saddle/point.hpp"

namespace saddle {

/// Per-iteration diagnostics. lyapunov is present only when the problem's
/// solution is known; variance columns only for stochastic runs.
struct TraceRecord {
  long k = 0;
  double grad_norm_sq = 0.0;
  std::optional<double> lyapunov;
  Point anchor;                     // in-memory only; CSV keeps the distance
  double anchor_dist_to_z0 = 0.0;
  std::optional<double> var_zk;
  std::optional<double> var_half;
  long eval_count = 0;
  // schedule snapshot for the CSV columns
  double alpha = 0.0;
  double c = 0.0;
  double gamma = 0.0;
};

struct Trace {
  std::vector<TraceRecord> records;
  Point z0;
  std::string solver;  // eag_fixed / eag_moving / eag_stochastic / popov_* / reflected
  std::string mode;    // popov anchor mode: fixed / v1 / v2 / reflected; empty for eag
  uint64_t seed = 0;
  std::map<std::string, std::string> metadata;  // free-form notes

  bool empty() const { return records.empty(); }
  size_t size() const { return records.size(); }
};

/// Fixed trace schema:
///   k,grad_norm_sq,lyapunov,anchor_dist_to_z0,alpha_k,c_k,gamma_k,var_zk,var_half
/// plus a `mode` column for Popov-family traces. Optional cells are empty.
/// Values are written with 17 significant digits so doubles round-trip.
void write_trace_csv(const Trace& trace, const std::string& path);

/// Parse a trace CSV written by write_trace_csv. Throws std::runtime_error
/// on malformed content. The anchor point itself is not in the file, only
/// its distance to z0.
Trace read_trace_csv(const std::string& path);

/// Format a double with round-trip precision (shortest of %.17g).
std::string format_double(double v);

}  // namespace saddle
