#include "saddle/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace saddle {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

static std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const bool with_mode = !trace.mode.empty();
  out << "k,grad_norm_sq,lyapunov,anchor_dist_to_z0,alpha_k,c_k,gamma_k,var_zk,var_half";
  if (with_mode) out << ",mode";
  out << "\n";
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_double(r.grad_norm_sq) << ',' << opt_cell(r.lyapunov)
        << ',' << format_double(r.anchor_dist_to_z0) << ',' << format_double(r.alpha)
        << ',' << format_double(r.c) << ',' << format_double(r.gamma) << ','
        << opt_cell(r.var_zk) << ',' << opt_cell(r.var_half);
    if (with_mode) out << ',' << trace.mode;
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

static std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

static double parse_num(const std::string& s, const std::string& path) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("corrupt trace " + path + ": bad number '" + s + "'");
  }
  if (pos != s.size())
    throw std::runtime_error("corrupt trace " + path + ": bad number '" + s + "'");
  return v;
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty trace " + path);
  auto head = split(header);
  if (head.size() < 9 || head[0] != "k" || head[1] != "grad_norm_sq")
    throw std::runtime_error("corrupt trace " + path + ": unexpected header");
  const bool with_mode = head.size() == 10 && head[9] == "mode";

  Trace t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != head.size())
      throw std::runtime_error("corrupt trace " + path + ": wrong column count");
    TraceRecord r;
    r.k = static_cast<long>(parse_num(cells[0], path));
    r.grad_norm_sq = parse_num(cells[1], path);
    if (!cells[2].empty()) r.lyapunov = parse_num(cells[2], path);
    r.anchor_dist_to_z0 = parse_num(cells[3], path);
    r.alpha = parse_num(cells[4], path);
    r.c = parse_num(cells[5], path);
    r.gamma = parse_num(cells[6], path);
    if (!cells[7].empty()) r.var_zk = parse_num(cells[7], path);
    if (!cells[8].empty()) r.var_half = parse_num(cells[8], path);
    if (with_mode) t.mode = cells[9];
    t.records.push_back(std::move(r));
  }
  return t;
}

}  // namespace saddle
