#include "saddle/solver_eag.hpp"

#include <cmath>

#include "saddle/diagnostics.hpp"

namespace saddle {

namespace {

void check_finite(const Point& p, long k, double limit, const char* what) {
  for (double v : p.coords) {
    if (!std::isfinite(v))
      throw DivergenceError(k, std::string(what) + " has non-finite coordinate");
    if (std::abs(v) > limit)
      throw DivergenceError(k, std::string(what) + " coordinate magnitude " +
                                   std::to_string(v) + " exceeds limit");
  }
}

// w = z + beta (zbar - z) - alpha g
Point blend_step(const Point& z, const Point& z_bar, double beta, double alpha,
                 const Point& g) {
  Point w = z;
  for (size_t i = 0; i < w.coords.size(); ++i)
    w.coords[i] = z.coords[i] + beta * (z_bar.coords[i] - z.coords[i]) -
                  alpha * g.coords[i];
  return w;
}

}  // namespace

EagState eag_init(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                  bool stochastic) {
  EagState s;
  s.k = 0;
  s.z = z0;
  s.z_bar = z0;  // z^0 = zbar^0
  s.z_half = z0;
  s.sched = ScheduleState::initial(cfg);
  if (!stochastic) {
    s.last_grad = problem.eval(z0);
    s.eval_count = 1;
  }
  return s;
}

void step_deterministic(EagState& s, const Problem& problem, const ScheduleConfig& cfg,
                        const EagOptions& opt) {
  const double alpha = s.sched.alpha;
  const double beta = s.sched.beta;

  Point g_k;
  if (opt.cache_gradient && s.last_grad) {
    g_k = *s.last_grad;
  } else {
    g_k = problem.eval(s.z);
    ++s.eval_count;
  }

  s.z_half = blend_step(s.z, s.z_bar, beta, alpha, g_k);
  check_finite(s.z_half, s.k, opt.divergence_limit, "z^{k+1/2}");

  Point g_half = problem.eval(s.z_half);
  ++s.eval_count;

  Point z_next = blend_step(s.z, s.z_bar, beta, alpha, g_half);
  check_finite(z_next, s.k, opt.divergence_limit, "z^{k+1}");

  ScheduleState next = advance(s.sched, cfg);

  // evaluated even when the anchor is frozen: it is the cached G(z^k)
  // consumed by the next half-step
  Point g_next = problem.eval(z_next);
  ++s.eval_count;
  if (cfg.gamma_sign != 0) {
    axpy(cfg.gamma_sign * next.gamma, g_next, s.z_bar);
    check_finite(s.z_bar, s.k, opt.divergence_limit, "anchor");
  }

  s.z = std::move(z_next);
  s.last_grad = std::move(g_next);
  s.sched = next;
  ++s.k;
}

void step_stochastic(EagState& s, const Problem& problem, Oracle& oracle,
                     const IndexSampler& sampler, const ScheduleConfig& cfg,
                     const EagOptions& opt) {
  if (s.z.primal_dim != problem.primal_dim() || s.z.dual_dim != problem.dual_dim())
    throw ContractViolation("state dims do not match problem");
  const double alpha = s.sched.alpha;
  const double beta = s.sched.beta;
  auto [i1, i2, i3] = sampler.triple(s.k);

  Point g1 = oracle.estimate(s.z, i1, s.k);
  s.z_half = blend_step(s.z, s.z_bar, beta, alpha, g1);
  check_finite(s.z_half, s.k, opt.divergence_limit, "z^{k+1/2}");

  Point g2 = oracle.estimate(s.z_half, i2, s.k);
  Point z_next = blend_step(s.z, s.z_bar, beta, alpha, g2);
  check_finite(z_next, s.k, opt.divergence_limit, "z^{k+1}");

  ScheduleState next = advance(s.sched, cfg);

  Point g3 = oracle.estimate(z_next, i3, s.k);
  s.eval_count += 3;
  if (cfg.gamma_sign != 0) {
    axpy(cfg.gamma_sign * next.gamma_tilde, g3, s.z_bar);
    check_finite(s.z_bar, s.k, opt.divergence_limit, "anchor");
  }

  s.z = std::move(z_next);
  s.last_grad.reset();  // component estimates are never reused across steps
  s.sched = next;
  ++s.k;
}

namespace {

TraceRecord make_record(const EagState& s, const Point& z0, const Point& g_true,
                        const std::optional<Point>& z_star) {
  TraceRecord r;
  r.k = s.k;
  r.grad_norm_sq = norm_sq(g_true);
  r.anchor = s.z_bar;
  r.anchor_dist_to_z0 = std::sqrt(dist_sq(s.z_bar, z0));
  r.eval_count = s.eval_count;
  r.alpha = s.sched.alpha;
  r.c = s.sched.c;
  r.gamma = s.sched.gamma;
  if (z_star) {
    r.lyapunov = lyapunov_value(s.sched.A, s.sched.B, s.sched.c, g_true, s.z, s.z_bar,
                                *z_star);
  }
  return r;
}

}  // namespace

RunResult run_eag(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                  const StopRule& stop, const EagOptions& opt) {
  if (stop.max_iter < 1) throw ContractViolation("max_iter must be >= 1");
  RunResult res;
  res.trace.z0 = z0;
  res.trace.solver = cfg.gamma_sign == 0 ? "eag_fixed" : "eag_moving";
  auto z_star = problem.solution();
  if (z_star)
    res.trace.metadata["z_star"] = "canonical problem solution";
  else
    res.trace.metadata["lyapunov"] = "unavailable: solution unknown";

  const long stride = std::max<long>(1, stop.record_stride);
  EagState s = eag_init(z0, problem, cfg);
  try {
    for (long k = 0; k < stop.max_iter; ++k) {
      const Point& g_true = *s.last_grad;  // cached exact gradient at z^k
      double gsq = norm_sq(g_true);
      bool converged = stop.tol_active() && gsq <= stop.grad_tol_sq;
      if (k % stride == 0 || converged)
        res.trace.records.push_back(make_record(s, z0, g_true, z_star));
      if (converged) {
        res.status = RunResult::Status::Converged;
        res.state = std::move(s);
        return res;
      }
      step_deterministic(s, problem, cfg, opt);
    }
  } catch (const DivergenceError& e) {
    res.status = RunResult::Status::Diverged;
    res.message = e.what();
    res.state = std::move(s);
    return res;
  }
  res.status = RunResult::Status::MaxIter;
  res.state = std::move(s);
  return res;
}

RunResult run_eag_stochastic(const Point& z0, const Problem& problem,
                             const OracleConfig& oracle_cfg, uint64_t seed,
                             const ScheduleConfig& cfg, const StopRule& stop,
                             const EagOptions& opt) {
  if (stop.max_iter < 1) throw ContractViolation("max_iter must be >= 1");
  OracleConfig ocfg = oracle_cfg;
  ocfg.stream_seed = seed ^ 0x6A09E667F3BCC909ull;
  Oracle oracle(ocfg, problem);
  IndexSampler sampler{seed, problem.dim()};

  RunResult res;
  res.trace.z0 = z0;
  res.trace.solver = "eag_stochastic";
  res.trace.seed = seed;
  res.trace.metadata["oracle"] = OracleConfig::kind_name(ocfg.kind);
  auto z_star = problem.solution();
  if (z_star)
    res.trace.metadata["z_star"] = "canonical problem solution";
  else
    res.trace.metadata["lyapunov"] = "unavailable: solution unknown";

  const long stride = std::max<long>(1, stop.record_stride);
  EagState s = eag_init(z0, problem, cfg, /*stochastic=*/true);
  try {
    for (long k = 0; k < stop.max_iter; ++k) {
      bool recording = k % stride == 0;
      bool converged = false;
      if (recording || stop.tol_active()) {
        Point g_true = problem.eval(s.z);  // diagnostic evaluation, not counted
        converged = stop.tol_active() && norm_sq(g_true) <= stop.grad_tol_sq;
        if (recording || converged) {
          TraceRecord rec = make_record(s, z0, g_true, z_star);
          rec.var_zk = oracle.variance_closed_form(s.z, s.k);
          res.trace.records.push_back(std::move(rec));
          recording = true;
        }
      }
      if (converged) {
        res.status = RunResult::Status::Converged;
        res.state = std::move(s);
        return res;
      }
      step_stochastic(s, problem, oracle, sampler, cfg, opt);
      if (recording)
        res.trace.records.back().var_half = oracle.variance_closed_form(s.z_half, k);
    }
  } catch (const DivergenceError& e) {
    res.status = RunResult::Status::Diverged;
    res.message = e.what();
    res.state = std::move(s);
    return res;
  }
  res.status = RunResult::Status::MaxIter;
  res.state = std::move(s);
  return res;
}

}  // namespace saddle
