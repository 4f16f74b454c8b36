#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saddle/point.hpp"
#include "saddle/trace.hpp"

namespace saddle {

/// V_k = A_k ||g||^2 + B_k <g, z - zbar> + c_k ||z* - zbar||^2.
double lyapunov_value(double A_k, double B_k, double c_k, const Point& g,
                      const Point& z, const Point& z_bar, const Point& z_star);

struct DescentReport {
  bool checkable = false;
  std::string reason;             // set when not checkable
  std::vector<long> violations;   // indices k where descent fails
};

/// Strict mode: flag every k with V_{k+1} > V_k (1 + 1e-12) + 1e-12.
/// Traces without a lyapunov column are reported not-checkable, never a pass.
DescentReport check_descent(const Trace& trace);

/// Ensemble slack mode over seeds: flag every k where the seed-averaged
/// V_k - V_{k+1} falls below -2 A_k alpha_k R (var_k + var_half/(1-beta_k))
/// by more than a 3-sigma Monte-Carlo band (sigma estimated from the seeds).
DescentReport check_descent_stochastic(const std::vector<Trace>& traces, double R);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  long k_lo = 0, k_hi = 0;   // window actually used
  double residual = 0.0;     // rms residual of the fit
  bool truncated = false;    // zero gradients forced a smaller window
};

/// Least squares of log(grad_norm_sq) against log(k) over k in [k_lo, k_hi].
RateFit fit_rate(const Trace& trace, long k_lo, long k_hi);

struct BoundReport {
  std::vector<long> violations;  // k where the bound fails
  double worst_ratio = 0.0;      // max over k of grad_norm_sq / bound
};

/// Per-k check of
///   grad_norm_sq(k) <= 4 [ (alpha0 R^2 + c0) z0_dist_sq + sum(k-1) ]
///                      / (alpha_inf_lb (k+1)(k+2)).
/// sum_variance, when present, holds the accumulated variance partial sums
/// (sum(k-1) at index k); absent means the deterministic bound.
BoundReport check_theorem_bound(const Trace& trace, double alpha_inf_lb, double alpha0,
                                double c0, double R, double z0_dist_sq,
                                const std::vector<double>* sum_variance = nullptr);

/// Accumulated variance sums for the stochastic bound: entry k holds
/// sum_{j<k} 2 A_j alpha_j R (var_j + var_half_j / (1 - beta_j)).
std::vector<double> accumulate_variance_sums(const Trace& trace, double R);

}  // namespace saddle
