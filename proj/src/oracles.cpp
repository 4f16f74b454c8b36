#include "saddle/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "saddle/trace.hpp"

namespace saddle {

const char* OracleConfig::kind_name(Kind k) {
  switch (k) {
    case Kind::Exact: return "exact";
    case Kind::Coordinate: return "coordinate";
    case Kind::Minibatch: return "minibatch";
    case Kind::AdditiveNoise: return "additive_noise";
  }
  return "?";
}

Oracle::Oracle(OracleConfig cfg, const Problem& problem)
    : cfg_(cfg), problem_(&problem), rng_(cfg.stream_seed) {
  if (cfg_.kind == OracleConfig::Kind::Minibatch) {
    if (cfg_.batch < 1 || cfg_.batch > problem.dim())
      throw ConfigError("batch", "must lie in 1..N=" + std::to_string(problem.dim()));
  }
  if (cfg_.kind == OracleConfig::Kind::AdditiveNoise) {
    if (!(cfg_.noise_sigma >= 0.0)) throw ConfigError("noise_sigma", "must be >= 0");
    if (!(cfg_.noise_decay >= 0.0)) throw ConfigError("noise_decay", "must be >= 0");
  }
}

Point Oracle::noise_vector(Rng& rng, long k) const {
  const int N = problem_->dim();
  // coords iid N(0, 1/N) scaled so E||xi||^2 = sigma^2/(k+1)^p exactly
  double scale = cfg_.noise_sigma /
                 std::sqrt(static_cast<double>(N)) /
                 std::pow(static_cast<double>(k + 1), cfg_.noise_decay / 2.0);
  Point xi = Point::zeros(problem_->primal_dim(), problem_->dual_dim());
  for (double& v : xi.coords) v = scale * rng.next_normal();
  return xi;
}

Point Oracle::estimate(const Point& z, int i, long k) {
  const int N = problem_->dim();
  switch (cfg_.kind) {
    case OracleConfig::Kind::Exact:
      return problem_->eval(z);
    case OracleConfig::Kind::Coordinate:
      return problem_->eval_component(i, z);
    case OracleConfig::Kind::Minibatch: {
      const int b = cfg_.batch;
      Point g = problem_->eval(z);
      Point out = Point::zeros(z.primal_dim, z.dual_dim);
      if (b == N) {
        // full batch collapses to the exact operator
        return g;
      }
      // i plus b-1 further distinct indices from the oracle's stream
      std::vector<char> picked(static_cast<size_t>(N) + 1, 0);
      picked[static_cast<size_t>(i)] = 1;
      int have = 1;
      while (have < b) {
        int j = rng_.next_index(N);
        if (!picked[static_cast<size_t>(j)]) {
          picked[static_cast<size_t>(j)] = 1;
          ++have;
        }
      }
      double w = static_cast<double>(N) / static_cast<double>(b);
      for (int j = 1; j <= N; ++j)
        if (picked[static_cast<size_t>(j)]) out.coords[j - 1] = w * g.coords[j - 1];
      return out;
    }
    case OracleConfig::Kind::AdditiveNoise: {
      Point g = problem_->eval(z);
      Point xi = noise_vector(rng_, k);
      return g + xi;
    }
  }
  throw ContractViolation("unknown oracle kind");
}

double Oracle::variance_closed_form(const Point& z, long k) const {
  const int N = problem_->dim();
  switch (cfg_.kind) {
    case OracleConfig::Kind::Exact:
      return 0.0;
    case OracleConfig::Kind::Coordinate:
      // (1/N) sum ||G_i||^2 - ||G||^2 = (N-1) ||G||^2
      return static_cast<double>(N - 1) * norm_sq(problem_->eval(z));
    case OracleConfig::Kind::Minibatch: {
      // without-replacement mean of b coordinate draws:
      // (N-b)/(b (N-1)) * population variance = (N-b)/b * ||G||^2
      const int b = cfg_.batch;
      if (b == N) return 0.0;
      return static_cast<double>(N - b) / static_cast<double>(b) *
             norm_sq(problem_->eval(z));
    }
    case OracleConfig::Kind::AdditiveNoise: {
      double s = cfg_.noise_sigma;
      return s * s / std::pow(static_cast<double>(k + 1), cfg_.noise_decay);
    }
  }
  throw ContractViolation("unknown oracle kind");
}

double Oracle::measure_variance_mc(const Point& z, long k, int n_samples,
                                   uint64_t probe_seed) const {
  if (n_samples < 2) throw ContractViolation("n_samples must be >= 2");
  const int N = problem_->dim();
  Point g = problem_->eval(z);
  Rng probe(probe_seed ^ 0xD1B54A32D192ED03ull);
  // fresh draws only; the oracle's own stream is never touched here
  Oracle scratch(cfg_, *problem_);
  scratch.rng_ = Rng(probe_seed ^ 0x8CB92BA72F3D8DD7ull);
  double acc = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    int i = probe.next_index(N);
    Point gi = scratch.estimate(z, i, k);
    acc += dist_sq(gi, g);
  }
  return acc / n_samples;
}

VarianceEstimate Oracle::measure_variance(const Point& z, const Point& z_half, long k,
                                          int n_samples, uint64_t probe_seed) const {
  VarianceEstimate est;
  est.k = k;
  est.n_samples = n_samples;
  if (variance_is_closed_form()) {
    est.var_zk = variance_closed_form(z, k);
    est.var_zk_half = variance_closed_form(z_half, k);
  } else {
    est.var_zk = measure_variance_mc(z, k, n_samples, probe_seed);
    est.var_zk_half = measure_variance_mc(z_half, k, n_samples, probe_seed + 1);
  }
  return est;
}

ConditionReport check_condition_numbers(const Oracle& oracle,
                                        const std::vector<std::pair<Point, Point>>& trace) {
  if (trace.empty()) throw ContractViolation("empty trace");
  ConditionReport rep;
  rep.var_zk.reserve(trace.size());
  rep.var_half.reserve(trace.size());
  for (size_t k = 0; k < trace.size(); ++k) {
    double v1 = oracle.variance_closed_form(trace[k].first, static_cast<long>(k));
    double v2 = oracle.variance_closed_form(trace[k].second, static_cast<long>(k));
    rep.var_zk.push_back(v1);
    rep.var_half.push_back(v2);
    double k4 = std::pow(static_cast<double>(k + 1), 4.0);
    rep.C1 = std::max(rep.C1, v1 * k4);
    rep.C2 = std::max(rep.C2, v2 * k4);
  }
  // decay check over the second half of the positive entries; a summable
  // sequence needs log-log slope <= -3.5 (O(k^-4) with margin)
  std::vector<double> lk, lv;
  for (size_t k = trace.size() / 2; k < trace.size(); ++k) {
    if (rep.var_zk[k] > 0.0) {
      lk.push_back(std::log(static_cast<double>(k + 1)));
      lv.push_back(std::log(rep.var_zk[k]));
    }
  }
  if (lk.size() >= 8) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t j = 0; j < lk.size(); ++j) {
      sx += lk[j];
      sy += lv[j];
      sxx += lk[j] * lk[j];
      sxy += lk[j] * lv[j];
    }
    double n = static_cast<double>(lk.size());
    rep.tail_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.violated = rep.tail_slope > -3.5;
  } else {
    // too few positive entries to fit: zero-variance oracles pass trivially
    rep.tail_slope = 0.0;
    rep.violated = false;
  }
  return rep;
}

void write_variance_csv(const ConditionReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "k,var_zk,var_zk_half,bound_C1_over_k4\n";
  for (size_t k = 0; k < report.var_zk.size(); ++k) {
    double k4 = std::pow(static_cast<double>(k + 1), 4.0);
    out << k << ',' << format_double(report.var_zk[k]) << ','
        << format_double(report.var_half[k]) << ',' << format_double(report.C1 / k4)
        << "\n";
  }
}

}  // namespace saddle
