#pragma once

#include "saddle/problem.hpp"
#include "saddle/schedules.hpp"
#include "saddle/solver_eag.hpp"  // StopRule, RunResult, EagOptions
#include "saddle/trace.hpp"

namespace saddle {

/// Anchor update variants for the Popov scheme.
enum class PopovMode {
  Fixed,     // zbar stays at z^0
  MovingV1,  // zbar^{k+1} = zbar^k + sign gamma_{k+1} G(z^{k+1})  (last iterate)
  MovingV2,  // zbar^{k+1} = zbar^k + sign gamma_{k+1} G(zhat^k)   (extrapolator, reused)
};

struct PopovConfig {
  PopovMode mode = PopovMode::Fixed;
  bool anchored = true;        // beta_k = 1/(k+2); false gives beta_k = 0
  bool eta_half_alpha = true;  // eta_k = alpha_k/2 from the schedule
  double eta_constant = 0.0;   // used when eta_half_alpha is false
};

/// Single-evaluation anchored scheme:
///   zhat^k  = beta_k zbar^k + (1-beta_k) z^k - eta_k G(zhat^{k-1})
///   z^{k+1} = beta_k zbar^k + (1-beta_k) z^k - eta_k G(zhat^k)
/// The extrapolator is formed without re-evaluating G(zhat^{k-1}): with
/// w^k the blend point, eta_k G(zhat^{k-1}) = (eta_k/eta_{k-1})(w^{k-1} - z^k)
/// exactly, so each step costs one fresh evaluation (plus one in MovingV1).
struct PopovState {
  long k = 0;
  Point z;
  Point z_bar;
  Point z_hat_prev;  // zhat^{k-1}
  Point w_prev;      // previous blend point w^{k-1}
  double eta_k = 0.0;
  double eta_prev = 0.0;
  double beta_k = 0.0;
  ScheduleState sched;
  long eval_count = 0;
};

/// Initialize at z0 (zbar = z0, zhat^{-1} = z0); one operator evaluation.
PopovState popov_init(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                      const PopovConfig& pcfg);

void step_popov(PopovState& s, const Problem& problem, const ScheduleConfig& cfg,
                const PopovConfig& pcfg, const EagOptions& opt = {});

RunResult run_popov(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                    const PopovConfig& pcfg, const StopRule& stop,
                    const EagOptions& opt = {});

/// Reflected-gradient iteration z^{k+1} = z^k - eta G(2 z^k - z^{k-1}), the
/// beta_k = 0, constant-eta degenerate case of the anchored scheme.
struct ReflectedState {
  long k = 0;   // valid from k = 1 (needs z^{k-1})
  Point z;
  Point z_prev;
  long eval_count = 0;
};

/// Bootstrap exactly like the beta = 0 Popov scheme: zhat^0 = z0 - eta G(z0),
/// z^1 = z0 - eta G(zhat^0); the returned state sits at k = 1.
ReflectedState reflected_init(const Point& z0, const Problem& problem, double eta);

void step_reflected(ReflectedState& s, const Problem& problem, double eta,
                    const EagOptions& opt = {});

RunResult run_reflected(const Point& z0, const Problem& problem, double eta,
                        const StopRule& stop, const EagOptions& opt = {});

const char* popov_mode_name(PopovMode mode);

}  // namespace saddle
