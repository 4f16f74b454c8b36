#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "saddle/oracles.hpp"
#include "saddle/problem.hpp"
#include "saddle/schedules.hpp"
#include "saddle/trace.hpp"

namespace saddle {

/// Anchored extragradient state machine. One step computes
///   z^{k+1/2} = z^k + (1/(k+2))(zbar^k - z^k) - alpha_k G(z^k)
///   z^{k+1}   = z^k + (1/(k+2))(zbar^k - z^k) - alpha_k G(z^{k+1/2})
///   zbar^{k+1} = zbar^k + sign * gamma_{k+1} G(z^{k+1})
/// gamma_sign = 0 freezes the anchor (the fixed-anchor algorithm).
struct EagState {
  long k = 0;
  Point z;
  Point z_bar;
  Point z_half;  // transient: the half point of the most recent step
  ScheduleState sched;
  std::optional<Point> last_grad;  // cached G(z^k), deterministic mode
  long eval_count = 0;             // solver-consumed operator evaluations
};

struct EagOptions {
  bool cache_gradient = true;      // reuse G(z^{k+1}) from the anchor update
  double divergence_limit = 1e12;  // any |coordinate| above this aborts
};

struct StopRule {
  long max_iter = 1000;
  double grad_tol_sq = 0.0;   // stop when ||G(z^k)||^2 <= this; 0 or a
                              // non-finite value disables early stopping
  long record_stride = 1;     // trace every record_stride-th iteration (plus the
                              // stopping one); 1 keeps one record per iteration

  bool tol_active() const {
    return grad_tol_sq > 0.0 && std::isfinite(grad_tol_sq);
  }
};

struct RunResult {
  enum class Status { Converged, MaxIter, Diverged };
  Status status = Status::MaxIter;
  EagState state;
  Trace trace;
  std::string message;
};

/// Initialize at z0 with zbar = z0. Deterministic mode evaluates and caches
/// G(z0); stochastic mode starts with no cache and a zero eval counter.
EagState eag_init(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                  bool stochastic = false);

/// One deterministic step; exactly 2 fresh operator evaluations with caching
/// (G at the half point and at the new iterate, the latter reused next step).
void step_deterministic(EagState& s, const Problem& problem, const ScheduleConfig& cfg,
                        const EagOptions& opt = {});

/// One stochastic step with component estimates at indices from
/// sampler.triple(k) at the three evaluation sites, and the K_bar-scaled
/// gamma~ at the anchor update. Exactly 3 component evaluations.
void step_stochastic(EagState& s, const Problem& problem, Oracle& oracle,
                     const IndexSampler& sampler, const ScheduleConfig& cfg,
                     const EagOptions& opt = {});

/// Run until max_iter or ||G(z^k)||^2 <= grad_tol_sq; one trace record per
/// iteration visited. Divergence is caught and reported with partial trace.
RunResult run_eag(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                  const StopRule& stop, const EagOptions& opt = {});

/// Stochastic variant; `seed` drives both the index sampler and the oracle
/// stream. Trace rows carry closed-form variance values at z^k and z^{k+1/2}.
RunResult run_eag_stochastic(const Point& z0, const Problem& problem,
                             const OracleConfig& oracle_cfg, uint64_t seed,
                             const ScheduleConfig& cfg, const StopRule& stop,
                             const EagOptions& opt = {});

}  // namespace saddle
