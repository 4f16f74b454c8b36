#include "saddle/schedules.hpp"

#include <cmath>
#include <string>

namespace saddle {

double ScheduleConfig::delta(long k) const {
  switch (delta_rule) {
    case DeltaRule::InverseSquare: {
      double kk = static_cast<double>(k + 1);
      return 1.0 / (kk * kk);
    }
    case DeltaRule::Geometric:
      return std::pow(geometric_ratio, static_cast<double>(k));
  }
  throw ContractViolation("unknown delta rule");
}

double ScheduleConfig::alpha0_limit(double R, double K_bar, bool stochastic) {
  if (!stochastic) return 3.0 / (4.0 * R);
  double a = 3.0 / (4.0 * R * std::sqrt(K_bar));
  double b = 1.0 / (std::sqrt(2.0) * R);
  return std::min(a, b);
}

void ScheduleConfig::validate() const {
  if (!(R > 0.0)) throw ConfigError("R", "must be positive");
  if (!(K_bar >= 1.0)) throw ConfigError("K_bar", "must be >= 1");
  if (!(c0 > 0.0)) throw ConfigError("c0", "must be positive");
  double limit = alpha0_limit(R, K_bar, stochastic);
  if (!(alpha0 > 0.0) || !(alpha0 < limit))
    throw ConfigError("alpha0", "must lie in (0, " + std::to_string(limit) + ")" +
                                    (stochastic ? " (stochastic bound)" : ""));
  if (delta_rule == DeltaRule::Geometric &&
      !(geometric_ratio > 0.0 && geometric_ratio < 1.0))
    throw ConfigError("geometric_ratio", "must lie in (0,1)");
  if (gamma_sign != -1 && gamma_sign != 0 && gamma_sign != 1)
    throw ConfigError("gamma_sign", "must be -1, 0, or +1");
}

ScheduleState ScheduleState::initial(const ScheduleConfig& cfg) {
  cfg.validate();
  ScheduleState s;
  s.k = 0;
  s.alpha = cfg.alpha0;
  s.beta = 0.5;  // 1/(k+2) at k=0
  s.B = 1.0;
  s.A = cfg.alpha0;  // alpha_0 * 1 * 2 / 2
  s.c = cfg.c0;
  s.delta = cfg.delta(0);
  s.gamma = 0.0;  // gamma_0 unused; defined from k=1 on
  s.gamma_tilde = 0.0;
  return s;
}

double alpha_next(double alpha_k, long k, double R) {
  double aR = alpha_k * R;
  if (!(alpha_k > 0.0) || !(aR < 1.0))
    throw ScheduleDivergence("alpha_k*R = " + std::to_string(aR) +
                             " outside (0,1) at k=" + std::to_string(k));
  double aR2 = aR * aR;
  double denom = static_cast<double>(k + 1) * static_cast<double>(k + 3);
  return alpha_k * (1.0 - (1.0 / denom) * (aR2 / (1.0 - aR2)));
}

double gamma_next(double B_next, double c_next, double delta_k, double K_bar, int sign) {
  if (!(c_next > 0.0)) throw ContractViolation("gamma_next: c must be positive");
  if (!(delta_k > 0.0)) throw ContractViolation("gamma_next: delta must be positive");
  if (!(K_bar >= 1.0)) throw ContractViolation("gamma_next: K_bar must be >= 1");
  return sign * B_next / (c_next * K_bar * (1.0 + 1.0 / delta_k));
}

ScheduleState advance(const ScheduleState& s, const ScheduleConfig& cfg) {
  ScheduleState n;
  n.k = s.k + 1;
  // fixed update order: delta -> c -> B -> gamma -> alpha -> A
  double delta_k = s.delta;
  n.delta = cfg.delta(n.k);
  n.c = s.c / (1.0 + delta_k);
  n.beta = 1.0 / static_cast<double>(n.k + 2);
  n.B = static_cast<double>(n.k + 1);
  n.gamma = gamma_next(n.B, n.c, delta_k, 1.0, 1);
  n.gamma_tilde = gamma_next(n.B, n.c, delta_k, cfg.K_bar, 1);
  n.alpha = alpha_next(s.alpha, s.k, cfg.R);
  n.A = n.alpha * static_cast<double>(n.k + 1) * static_cast<double>(n.k + 2) / 2.0;
  return n;
}

std::pair<double, double> default_stochastic_init(double R, double K_bar) {
  if (!(R > 0.0)) throw ContractViolation("R must be positive");
  if (!(K_bar >= 1.0)) throw ContractViolation("K_bar must be >= 1");
  double sqrtK = std::sqrt(K_bar);
  double pi = 3.14159265358979323846;
  double alpha0 = 0.9 * (3.0 / 4.0) / (R * sqrtK);
  double c0 = 1.01 * (4.0 / 3.0) * std::exp(pi * pi / 6.0) * R * sqrtK;
  return {alpha0, c0};
}

double alpha_limit_lower_bound(double alpha0, double R) {
  double rho = alpha0 * R;
  // valid whenever rho < sqrt(4/7) ~ 0.7559; both alpha0 intervals keep rho below
  double eta = 0.75 * rho * rho / (1.0 - rho * rho);
  if (!(eta < 1.0))
    throw ScheduleDivergence("alpha limit bound undefined: eta >= 1 for rho=" +
                             std::to_string(rho));
  return (1.0 - eta) * alpha0;
}

double c_limit_lower_bound(const ScheduleConfig& cfg, long terms) {
  double prod = cfg.c0;
  for (long k = 0; k < terms; ++k) prod /= (1.0 + cfg.delta(k));
  // tail: prod_{k>=terms} 1/(1+delta_k) >= exp(-sum_{k>=terms} delta_k)
  double tail_sum;
  switch (cfg.delta_rule) {
    case DeltaRule::InverseSquare:
      // sum_{k>=K} 1/(k+1)^2 <= 1/K
      tail_sum = 1.0 / static_cast<double>(terms);
      break;
    case DeltaRule::Geometric:
      tail_sum = std::pow(cfg.geometric_ratio, static_cast<double>(terms)) /
                 (1.0 - cfg.geometric_ratio);
      break;
    default:
      throw ContractViolation("unknown delta rule");
  }
  return prod * std::exp(-tail_sum);
}

LimitDiagnostics limit_diagnostics(const ScheduleConfig& cfg) {
  LimitDiagnostics d;
  d.alpha_inf_lb = alpha_limit_lower_bound(cfg.alpha0, cfg.R);
  d.c_inf_lb = c_limit_lower_bound(cfg);
  d.rate_theorem_precondition = d.c_inf_lb * d.alpha_inf_lb >= 1.0;
  return d;
}

}  // namespace saddle
