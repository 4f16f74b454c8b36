#include "saddle/diagnostics.hpp"

#include <cmath>

#include "saddle/errors.hpp"

namespace saddle {

double lyapunov_value(double A_k, double B_k, double c_k, const Point& g,
                      const Point& z, const Point& z_bar, const Point& z_star) {
  if (!g.same_shape(z) || !z.same_shape(z_bar) || !z.same_shape(z_star))
    throw ContractViolation("lyapunov_value: inconsistent dimensions");
  double cross = 0.0, dist = 0.0;
  for (size_t i = 0; i < z.coords.size(); ++i) {
    cross += g.coords[i] * (z.coords[i] - z_bar.coords[i]);
    double d = z_star.coords[i] - z_bar.coords[i];
    dist += d * d;
  }
  return A_k * norm_sq(g) + B_k * cross + c_k * dist;
}

DescentReport check_descent(const Trace& trace) {
  DescentReport rep;
  for (const auto& r : trace.records) {
    if (!r.lyapunov) {
      rep.checkable = false;
      rep.reason = "lyapunov column missing at k=" + std::to_string(r.k);
      return rep;
    }
  }
  rep.checkable = true;
  for (size_t i = 0; i + 1 < trace.records.size(); ++i) {
    double vk = *trace.records[i].lyapunov;
    double vn = *trace.records[i + 1].lyapunov;
    if (vn > vk * (1.0 + 1e-12) + 1e-12) rep.violations.push_back(trace.records[i].k);
  }
  return rep;
}

DescentReport check_descent_stochastic(const std::vector<Trace>& traces, double R) {
  DescentReport rep;
  if (traces.empty()) {
    rep.reason = "no traces";
    return rep;
  }
  size_t len = traces[0].size();
  for (const auto& t : traces) {
    len = std::min(len, t.size());
    for (const auto& r : t.records) {
      if (!r.lyapunov || !r.var_zk || !r.var_half) {
        rep.reason = "lyapunov or variance column missing";
        return rep;
      }
    }
  }
  if (len < 2) {
    rep.checkable = true;  // no pairs to check
    return rep;
  }
  rep.checkable = true;
  const double n = static_cast<double>(traces.size());
  for (size_t i = 0; i + 1 < len; ++i) {
    // slack_s = (V_k - V_{k+1}) + 2 A_k alpha_k R (var_k + var_half/(1-beta_k));
    // the descent bound asks for mean slack >= 0 up to MC noise
    double mean = 0.0, mean_sq = 0.0;
    for (const auto& t : traces) {
      const auto& r = t.records[i];
      long k = r.k;
      double beta = 1.0 / static_cast<double>(k + 2);
      double A = r.alpha * static_cast<double>(k + 1) * static_cast<double>(k + 2) / 2.0;
      double allowance = 2.0 * A * r.alpha * R * (*r.var_zk + *r.var_half / (1.0 - beta));
      double slack = (*r.lyapunov - *t.records[i + 1].lyapunov) + allowance;
      mean += slack;
      mean_sq += slack * slack;
    }
    mean /= n;
    mean_sq /= n;
    double sample_var = (mean_sq - mean * mean) * n / (n - 1.0);
    double se = std::sqrt(std::max(0.0, sample_var) / n);
    if (mean + 3.0 * se < 0.0) rep.violations.push_back(traces[0].records[i].k);
  }
  return rep;
}

RateFit fit_rate(const Trace& trace, long k_lo, long k_hi) {
  if (k_lo < 1 || k_hi <= k_lo) throw ContractViolation("rate window requires k_hi > k_lo >= 1");
  RateFit fit;
  fit.k_lo = k_lo;
  fit.k_hi = k_hi;
  std::vector<double> lx, ly;
  for (const auto& r : trace.records) {
    if (r.k < k_lo || r.k > k_hi) continue;
    if (r.grad_norm_sq <= 0.0) {
      fit.truncated = true;  // zero gradient: drop the tail of the window
      break;
    }
    lx.push_back(std::log(static_cast<double>(r.k)));
    ly.push_back(std::log(r.grad_norm_sq));
  }
  if (lx.size() < 2) throw ContractViolation("rate window contains fewer than 2 usable records");
  double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

BoundReport check_theorem_bound(const Trace& trace, double alpha_inf_lb, double alpha0,
                                double c0, double R, double z0_dist_sq,
                                const std::vector<double>* sum_variance) {
  if (!(alpha_inf_lb > 0.0))
    throw ContractViolation("alpha_inf_lb must be a positive certified bound");
  BoundReport rep;
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    double numer = (alpha0 * R * R + c0) * z0_dist_sq;
    if (sum_variance) {
      if (i >= sum_variance->size())
        throw ContractViolation("sum_variance shorter than trace");
      numer += (*sum_variance)[i];
    }
    double bound = 4.0 * numer /
                   (alpha_inf_lb * static_cast<double>(r.k + 1) *
                    static_cast<double>(r.k + 2));
    double ratio = r.grad_norm_sq / bound;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (r.grad_norm_sq > bound) rep.violations.push_back(r.k);
  }
  return rep;
}

std::vector<double> accumulate_variance_sums(const Trace& trace, double R) {
  std::vector<double> sums;
  sums.reserve(trace.size());
  double acc = 0.0;
  for (const auto& r : trace.records) {
    sums.push_back(acc);  // sum(k-1): variance accumulated before step k
    if (r.var_zk && r.var_half) {
      long k = r.k;
      double beta = 1.0 / static_cast<double>(k + 2);
      double A = r.alpha * static_cast<double>(k + 1) * static_cast<double>(k + 2) / 2.0;
      acc += 2.0 * A * r.alpha * R * (*r.var_zk + *r.var_half / (1.0 - beta));
    }
  }
  return sums;
}

}  // namespace saddle
