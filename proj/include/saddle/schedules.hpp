#pragma once

#include <cstdint>
#include <utility>

#include "saddle/errors.hpp"

namespace saddle {

enum class DeltaRule {
  InverseSquare,  // delta_k = 1/(k+1)^2
  Geometric,      // delta_k = ratio^k, 0 < ratio < 1
};

/// Coefficient-sequence configuration. The sequences are fully prescribed:
///   beta_k  = 1/(k+2),  B_k = k+1,  A_k = alpha_k (k+1)(k+2)/2
///   alpha_{k+1} = alpha_k (1 - (1/((k+1)(k+3))) alpha_k^2 R^2 / (1 - alpha_k^2 R^2))
///   c_{k+1} = c_k / (1 + delta_k)
///   gamma_{k+1} = B_{k+1} / (c_{k+1} (1 + 1/delta_k)), gamma~ additionally / K_bar
struct ScheduleConfig {
  double alpha0 = 0.0;
  double c0 = 0.0;
  double R = 1.0;
  double K_bar = 1.0;  // 1 for deterministic runs
  DeltaRule delta_rule = DeltaRule::InverseSquare;
  double geometric_ratio = 0.5;
  int gamma_sign = -1;     // -1 / +1 applied at anchor updates; 0 freezes the anchor
  bool stochastic = false; // selects the alpha0 validity interval

  double delta(long k) const;
  void validate() const;  // throws ConfigError naming the offending field

  /// Upper end of the valid alpha0 interval:
  /// deterministic 3/(4R); stochastic min{3/(4R sqrt(K)), 1/(sqrt(2) R)}.
  static double alpha0_limit(double R, double K_bar, bool stochastic);
};

/// All coupled coefficients at one iteration index.
struct ScheduleState {
  long k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double A = 0.0;
  double B = 0.0;
  double c = 0.0;
  double delta = 0.0;        // delta_k (consumed stepping k -> k+1)
  double gamma = 0.0;        // gamma_k (0 at k=0; defined from k=1 on)
  double gamma_tilde = 0.0;  // K_bar-scaled variant

  static ScheduleState initial(const ScheduleConfig& cfg);
};

/// One alpha recurrence step. Requires 0 < alpha_k * R < 1.
double alpha_next(double alpha_k, long k, double R);

/// gamma_{k+1} = sign * B_{k+1} / (c_{k+1} * K_bar * (1 + 1/delta_k)).
/// K_bar = 1 recovers the deterministic gamma.
double gamma_next(double B_next, double c_next, double delta_k, double K_bar, int sign);

/// Advance all coupled sequences one index, in the fixed order
/// delta -> c -> B -> gamma/gamma~ -> alpha -> A.
ScheduleState advance(const ScheduleState& s, const ScheduleConfig& cfg);

/// The experiment initialization constants
///   alpha0 = 0.9 (3/4) / (R sqrt(K)),  c0 = 1.01 (4/3) e^{pi^2/6} R sqrt(K).
std::pair<double, double> default_stochastic_init(double R, double K_bar);

/// Certified lower bound on lim alpha_k: (1 - eta) alpha0 with
/// eta = (1/2)(1/1 + 1/2) rho^2/(1 - rho^2), rho = alpha0 * R.
double alpha_limit_lower_bound(double alpha0, double R);

/// Certified lower bound on lim c_k: partial product to `terms` times
/// the analytic tail bound exp(-sum of remaining delta_j).
double c_limit_lower_bound(const ScheduleConfig& cfg, long terms = 200000);

struct LimitDiagnostics {
  double alpha_inf_lb = 0.0;
  double c_inf_lb = 0.0;
  /// Whether the convergence-theorem precondition c_inf * alpha_inf >= 1
  /// holds for the certified lower bounds (conservative: may report false
  /// even when the true limits satisfy it).
  bool rate_theorem_precondition = false;
};

LimitDiagnostics limit_diagnostics(const ScheduleConfig& cfg);

}  // namespace saddle
