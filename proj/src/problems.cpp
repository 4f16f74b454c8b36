#include "saddle/problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace saddle {

// ---------------------------------------------------------------------------
// AlmostBilinear
// ---------------------------------------------------------------------------

AlmostBilinear::AlmostBilinear(double epsilon, int d) : Problem(d, d), eps_(epsilon) {
  if (!(epsilon >= 0.0)) throw ContractViolation("epsilon must be >= 0");
  if (d < 1) throw ContractViolation("dimension must be >= 1");
}

double AlmostBilinear::lipschitz() const { return std::sqrt(1.0 + eps_ * eps_); }

std::optional<Point> AlmostBilinear::solution() const {
  return Point::zeros(primal_dim(), dual_dim());
}

std::string AlmostBilinear::describe() const {
  return "almost_bilinear(eps=" + std::to_string(eps_) +
         ", d=" + std::to_string(primal_dim()) + ")";
}

double AlmostBilinear::objective(const Point& z) const {
  int d = primal_dim();
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (int i = 0; i < d; ++i) {
    double x = z.coords[i], y = z.coords[d + i];
    xx += x * x;
    yy += y * y;
    xy += x * y;
  }
  return 0.5 * eps_ * xx + xy - 0.5 * eps_ * yy;
}

void AlmostBilinear::eval_impl(const Point& z, Point& out) const {
  int d = primal_dim();
  for (int i = 0; i < d; ++i) {
    double x = z.coords[i], y = z.coords[d + i];
    out.coords[i] = eps_ * x + y;       // grad_x
    out.coords[d + i] = -x + eps_ * y;  // -grad_y
  }
}

Point AlmostBilinear::sample_point(Rng& rng) const {
  Point p = Point::zeros(primal_dim(), dual_dim());
  for (double& v : p.coords) v = rng.next_normal();
  return p;
}

double AlmostBilinear::component_lipschitz(int i) const {
  if (i < 1 || i > dim()) throw ContractViolation("component index out of range");
  // each row of the linear operator has norm sqrt(1 + eps^2)
  return static_cast<double>(dim()) * std::sqrt(1.0 + eps_ * eps_);
}

// ---------------------------------------------------------------------------
// Simplex projection
// ---------------------------------------------------------------------------

std::vector<double> project_simplex(std::span<const double> v) {
  const size_t d = v.size();
  if (d == 0) throw ContractViolation("empty vector");
  for (double x : v)
    if (!std::isfinite(x)) throw DomainError("non-finite input to project_simplex");

  // already feasible (within the 1e-12 feasibility tolerance): the projection
  // is the identity, which also makes repeated projection bitwise idempotent
  {
    double sum = 0.0;
    bool nonneg = true;
    for (double x : v) {
      if (x < 0.0) nonneg = false;
      sum += x;
    }
    if (nonneg && std::abs(sum - 1.0) <= 1e-12)
      return std::vector<double>(v.begin(), v.end());
  }

  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = u[0] - 1.0;
  for (size_t j = 0; j < d; ++j) {
    cumsum += u[j];
    double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  std::vector<double> out(d);
  for (size_t j = 0; j < d; ++j) out[j] = std::max(0.0, v[j] - theta);
  return out;
}

// ---------------------------------------------------------------------------
// SimplexGame
// ---------------------------------------------------------------------------

SimplexGame::SimplexGame(int n, int m, uint64_t seed, double lambda)
    : Problem(n, m), seed_(seed), lambda_(lambda) {
  if (n < 2 || m < 2) throw ContractViolation("game needs at least 2 strategies per player");
  if (!(lambda > 0.0)) throw ContractViolation("lambda must be positive");
  // data frozen at construction; G is deterministic thereafter
  Rng rng(seed);
  A_.resize(static_cast<size_t>(n) * n);
  for (double& a : A_) a = rng.next_normal();
  Q_.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += A_[k * n + i] * A_[k * n + j];
      Q_[i * n + j] = s;
    }
  K_.resize(static_cast<size_t>(m) * n);
  for (double& k : K_) k = rng.next_uniform(-1.0, 1.0);
}

SimplexGame SimplexGame::with_matrices(int n, int m, std::vector<double> A_rows_by_n,
                                       std::vector<double> K, double lambda) {
  if (A_rows_by_n.size() % static_cast<size_t>(n) != 0)
    throw ContractViolation("A must have a multiple of n entries");
  if (K.size() != static_cast<size_t>(m) * n)
    throw ContractViolation("K must be m x n");
  SimplexGame g(n, m, 0, lambda);
  int rows = static_cast<int>(A_rows_by_n.size()) / n;
  g.A_ = std::move(A_rows_by_n);
  g.Q_.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < rows; ++k) s += g.A_[k * n + i] * g.A_[k * n + j];
      g.Q_[i * n + j] = s;
    }
  g.K_ = std::move(K);
  g.cached_norm_ = -1.0;
  return g;
}

std::string SimplexGame::describe() const {
  return "simplex_game(n=" + std::to_string(primal_dim()) +
         ", m=" + std::to_string(dual_dim()) + ", seed=" + std::to_string(seed_) +
         ", lambda=" + std::to_string(lambda_) + ")";
}

Point SimplexGame::smooth_operator(const Point& z) const {
  int n = primal_dim(), m = dual_dim();
  Point out = Point::zeros(n, m);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += Q_[i * n + j] * z.coords[j];
    for (int j = 0; j < m; ++j) s += K_[j * n + i] * z.coords[n + j];
    out.coords[i] = s;  // (Qx + K^T y)_i
  }
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += K_[j * n + i] * z.coords[i];
    out.coords[n + j] = -s;  // -(Kx)_j
  }
  return out;
}

Point SimplexGame::project_feasible(const Point& z) const {
  int n = primal_dim(), m = dual_dim();
  Point out = Point::zeros(n, m);
  auto px = project_simplex(std::span<const double>(z.coords.data(), n));
  auto py = project_simplex(std::span<const double>(z.coords.data() + n, m));
  std::copy(px.begin(), px.end(), out.coords.begin());
  std::copy(py.begin(), py.end(), out.coords.begin() + n);
  return out;
}

Point SimplexGame::split_step_operator(const Point& z, double lambda) const {
  check_input(z);
  Point g = smooth_operator(z);
  Point shifted = z;
  axpy(-lambda, g, shifted);
  Point projected = project_feasible(shifted);
  return z - projected;
}

void SimplexGame::eval_impl(const Point& z, Point& out) const {
  out = split_step_operator(z, lambda_);
}

Point SimplexGame::uniform_strategies() const {
  Point p = Point::zeros(primal_dim(), dual_dim());
  for (int i = 0; i < primal_dim(); ++i) p.coords[i] = 1.0 / primal_dim();
  for (int j = 0; j < dual_dim(); ++j) p.coords[primal_dim() + j] = 1.0 / dual_dim();
  return p;
}

Point SimplexGame::sample_point(Rng& rng) const {
  Point p = Point::zeros(primal_dim(), dual_dim());
  for (double& v : p.coords) v = rng.next_uniform();
  return project_feasible(p);
}

double SimplexGame::payoff(const Point& z) const {
  int n = primal_dim(), m = dual_dim();
  double qxx = 0.0, kxy = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += Q_[i * n + j] * z.coords[j];
    qxx += z.coords[i] * s;
  }
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += K_[j * n + i] * z.coords[i];
    kxy += z.coords[n + j] * s;
  }
  return 0.5 * qxx + kxy;
}

double SimplexGame::smooth_operator_norm() const {
  if (cached_norm_ > 0.0) return cached_norm_;
  int n = primal_dim(), m = dual_dim();
  // power iteration on M^T M where M = [[Q, K^T], [-K, 0]]
  auto apply_M = [&](const Point& v) { return smooth_operator(v); };
  auto apply_Mt = [&](const Point& v) {
    Point out = Point::zeros(n, m);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += Q_[i * n + j] * v.coords[j];  // Q symmetric
      for (int j = 0; j < m; ++j) s -= K_[j * n + i] * v.coords[n + j];
      out.coords[i] = s;
    }
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += K_[j * n + i] * v.coords[i];
      out.coords[n + j] = s;
    }
    return out;
  };
  Rng rng(seed_ ^ 0xA5A5A5A5A5A5A5A5ull);
  Point v = Point::zeros(n, m);
  for (double& x : v.coords) x = rng.next_normal();
  double estimate = 0.0, prev = -1.0;
  for (long it = 0; it < 100000; ++it) {
    Point w = apply_Mt(apply_M(v));
    double wn = norm(w);
    if (wn == 0.0) {
      cached_norm_ = 0.0;
      return 0.0;
    }
    estimate = std::sqrt(wn);  // ||M^T M v|| -> sigma_max^2
    v = (1.0 / wn) * w;
    if (prev > 0.0 && std::abs(estimate - prev) <= 1e-8 * estimate) {
      cached_norm_ = estimate;
      return estimate;
    }
    prev = estimate;
  }
  throw EstimationError("power iteration did not converge to 1e-8 in 1e5 iterations");
}

double SimplexGame::lipschitz() const {
  // spectral-norm bound of the smooth block, capped by the composite
  // residual bound 1 + sqrt(1 + lambda^2 ||M||^2); the cap is ||M|| times
  // a factor <= 1 whenever it is active
  double Rm = smooth_operator_norm();
  double composite = 1.0 + std::sqrt(1.0 + lambda_ * lambda_ * Rm * Rm);
  return std::min(Rm, composite);
}

}  // namespace saddle
