#include "saddle/solver_popov.hpp"

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

double eta_at(const PopovConfig& pcfg, const ScheduleState& sched) {
  return pcfg.eta_half_alpha ? sched.alpha / 2.0 : pcfg.eta_constant;
}

double beta_at(const PopovConfig& pcfg, const ScheduleState& sched) {
  return pcfg.anchored ? sched.beta : 0.0;
}

}  // namespace

const char* popov_mode_name(PopovMode mode) {
  switch (mode) {
    case PopovMode::Fixed: return "fixed";
    case PopovMode::MovingV1: return "v1";
    case PopovMode::MovingV2: return "v2";
  }
  return "?";
}

PopovState popov_init(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                      const PopovConfig& pcfg) {
  if (!pcfg.eta_half_alpha && !(pcfg.eta_constant > 0.0))
    throw ConfigError("eta_constant", "must be positive when eta_half_alpha is off");
  if (z0.primal_dim != problem.primal_dim() || z0.dual_dim != problem.dual_dim())
    throw ContractViolation("start point dims do not match problem");
  PopovState s;
  s.k = 0;
  s.z = z0;
  s.z_bar = z0;
  s.z_hat_prev = z0;  // zhat^{-1} := z^0
  s.w_prev = z0;
  s.sched = ScheduleState::initial(cfg);
  s.eta_k = eta_at(pcfg, s.sched);
  s.eta_prev = s.eta_k;
  s.beta_k = beta_at(pcfg, s.sched);
  s.eval_count = 0;
  return s;
}

void step_popov(PopovState& s, const Problem& problem, const ScheduleConfig& cfg,
                const PopovConfig& pcfg, const EagOptions& opt) {
  const double beta = beta_at(pcfg, s.sched);
  const double eta = eta_at(pcfg, s.sched);

  // blend point w^k = z^k + beta (zbar^k - z^k)
  Point w = s.z;
  for (size_t i = 0; i < w.coords.size(); ++i)
    w.coords[i] = s.z.coords[i] + beta * (s.z_bar.coords[i] - s.z.coords[i]);

  // extrapolator zhat^k = w^k - eta_k G(zhat^{k-1}); the gradient term is
  // recovered from the previous step, eta_{k-1} G(zhat^{k-1}) = w^{k-1} - z^k
  Point z_hat = Point::zeros(w.primal_dim, w.dual_dim);
  if (s.k == 0) {
    Point g0 = problem.eval(s.z_hat_prev);
    ++s.eval_count;
    for (size_t i = 0; i < w.coords.size(); ++i)
      z_hat.coords[i] = w.coords[i] - eta * g0.coords[i];
  } else {
    double ratio = eta / s.eta_prev;
    for (size_t i = 0; i < w.coords.size(); ++i)
      z_hat.coords[i] = w.coords[i] - ratio * (s.w_prev.coords[i] - s.z.coords[i]);
  }
  check_finite(z_hat, s.k, opt.divergence_limit, "zhat^k");

  Point g_hat = problem.eval(z_hat);  // the single fresh evaluation
  ++s.eval_count;

  Point z_next = w;
  axpy(-eta, g_hat, z_next);
  check_finite(z_next, s.k, opt.divergence_limit, "z^{k+1}");

  ScheduleState next = advance(s.sched, cfg);

  double gamma_signed = cfg.gamma_sign * next.gamma;
  switch (pcfg.mode) {
    case PopovMode::Fixed:
      break;
    case PopovMode::MovingV1:
      if (gamma_signed != 0.0) {
        Point g_next = problem.eval(z_next);
        ++s.eval_count;
        axpy(gamma_signed, g_next, s.z_bar);
        check_finite(s.z_bar, s.k, opt.divergence_limit, "anchor");
      }
      break;
    case PopovMode::MovingV2:
      if (gamma_signed != 0.0) {
        axpy(gamma_signed, g_hat, s.z_bar);  // bit-identical reuse of G(zhat^k)
        check_finite(s.z_bar, s.k, opt.divergence_limit, "anchor");
      }
      break;
  }

  s.w_prev = std::move(w);
  s.z_hat_prev = std::move(z_hat);
  s.eta_prev = eta;
  s.z = std::move(z_next);
  s.sched = next;
  ++s.k;
  s.eta_k = eta_at(pcfg, s.sched);
  s.beta_k = beta_at(pcfg, s.sched);
}

RunResult run_popov(const Point& z0, const Problem& problem, const ScheduleConfig& cfg,
                    const PopovConfig& pcfg, const StopRule& stop, const EagOptions& opt) {
  if (stop.max_iter < 1) throw ContractViolation("max_iter must be >= 1");
  RunResult res;
  res.trace.z0 = z0;
  res.trace.solver = std::string("popov_") + popov_mode_name(pcfg.mode);
  res.trace.mode = popov_mode_name(pcfg.mode);
  res.trace.metadata["z_hat_init"] = "zhat^{-1} = z^0";
  auto z_star = problem.solution();
  if (z_star) res.trace.metadata["z_star"] = "canonical problem solution";

  const long stride = std::max<long>(1, stop.record_stride);
  PopovState s = popov_init(z0, problem, cfg, pcfg);
  EagState out;  // RunResult reuses the EAG state container for (z, zbar, k)
  try {
    for (long k = 0; k < stop.max_iter; ++k) {
      bool recording = k % stride == 0;
      bool converged = false;
      if (recording || stop.tol_active()) {
        Point g_true = problem.eval(s.z);  // diagnostic evaluation, not counted
        double gsq = norm_sq(g_true);
        converged = stop.tol_active() && gsq <= stop.grad_tol_sq;
        if (recording || converged) {
          TraceRecord rec;
          rec.k = s.k;
          rec.grad_norm_sq = gsq;
          rec.anchor = s.z_bar;
          rec.anchor_dist_to_z0 = std::sqrt(dist_sq(s.z_bar, z0));
          rec.eval_count = s.eval_count;
          rec.alpha = s.sched.alpha;
          rec.c = s.sched.c;
          rec.gamma = s.sched.gamma;
          if (z_star)
            rec.lyapunov = lyapunov_value(s.sched.A, s.sched.B, s.sched.c, g_true, s.z,
                                          s.z_bar, *z_star);
          res.trace.records.push_back(std::move(rec));
        }
      }
      if (converged) {
        res.status = RunResult::Status::Converged;
        break;
      }
      step_popov(s, problem, cfg, pcfg, opt);
      if (k + 1 == stop.max_iter) res.status = RunResult::Status::MaxIter;
    }
  } catch (const DivergenceError& e) {
    res.status = RunResult::Status::Diverged;
    res.message = e.what();
  }
  out.k = s.k;
  out.z = s.z;
  out.z_bar = s.z_bar;
  out.z_half = s.z_hat_prev;
  out.sched = s.sched;
  out.eval_count = s.eval_count;
  res.state = std::move(out);
  return res;
}

ReflectedState reflected_init(const Point& z0, const Problem& problem, double eta) {
  if (!(eta > 0.0)) throw ContractViolation("eta must be positive");
  ReflectedState s;
  Point g0 = problem.eval(z0);
  Point z_hat0 = z0;
  axpy(-eta, g0, z_hat0);
  Point g_hat = problem.eval(z_hat0);
  s.z = z0;
  axpy(-eta, g_hat, s.z);
  s.z_prev = z0;
  s.k = 1;
  s.eval_count = 2;
  return s;
}

void step_reflected(ReflectedState& s, const Problem& problem, double eta,
                    const EagOptions& opt) {
  if (s.k < 1) throw ContractViolation("reflected step needs k >= 1");
  // reflection point 2 z^k - z^{k-1}, formed as z^k - (z^{k-1} - z^k)
  Point y = s.z;
  for (size_t i = 0; i < y.coords.size(); ++i)
    y.coords[i] = s.z.coords[i] - (s.z_prev.coords[i] - s.z.coords[i]);
  check_finite(y, s.k, opt.divergence_limit, "reflection point");
  Point g = problem.eval(y);
  ++s.eval_count;
  Point z_next = s.z;
  axpy(-eta, g, z_next);
  check_finite(z_next, s.k, opt.divergence_limit, "z^{k+1}");
  s.z_prev = std::move(s.z);
  s.z = std::move(z_next);
  ++s.k;
}

RunResult run_reflected(const Point& z0, const Problem& problem, double eta,
                        const StopRule& stop, const EagOptions& opt) {
  if (stop.max_iter < 1) throw ContractViolation("max_iter must be >= 1");
  RunResult res;
  res.trace.z0 = z0;
  res.trace.solver = "reflected";
  res.trace.mode = "reflected";
  const long stride = std::max<long>(1, stop.record_stride);
  ReflectedState s = reflected_init(z0, problem, eta);
  EagState out;
  try {
    for (long k = 1; k <= stop.max_iter; ++k) {
      bool recording = (k - 1) % stride == 0;
      bool converged = false;
      if (recording || stop.tol_active()) {
        Point g_true = problem.eval(s.z);
        double gsq = norm_sq(g_true);
        converged = stop.tol_active() && gsq <= stop.grad_tol_sq;
        if (recording || converged) {
          TraceRecord rec;
          rec.k = s.k;
          rec.grad_norm_sq = gsq;
          rec.anchor = z0;
          rec.anchor_dist_to_z0 = 0.0;
          rec.eval_count = s.eval_count;
          res.trace.records.push_back(std::move(rec));
        }
      }
      if (converged) {
        res.status = RunResult::Status::Converged;
        break;
      }
      step_reflected(s, problem, eta, opt);
      if (k == stop.max_iter) res.status = RunResult::Status::MaxIter;
    }
  } catch (const DivergenceError& e) {
    res.status = RunResult::Status::Diverged;
    res.message = e.what();
  }
  out.k = s.k;
  out.z = s.z;
  out.z_bar = z0;
  out.z_half = s.z_prev;
  out.eval_count = s.eval_count;
  res.state = std::move(out);
  return res;
}

}  // namespace saddle
