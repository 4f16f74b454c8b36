#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "saddle/problem.hpp"

namespace saddle {

/// f(x,y) = eps ||x||^2/2 + <x,y> - eps ||y||^2/2 with x,y in R^d.
/// G is linear, G(x,y) = (eps x + y, -x + eps y), R = sqrt(1 + eps^2),
/// unique saddle at the origin.
class AlmostBilinear : public Problem {
 public:
  AlmostBilinear(double epsilon, int d);

  double epsilon() const { return eps_; }
  double lipschitz() const override;
  std::optional<Point> solution() const override;
  std::string describe() const override;

  bool has_objective() const override { return true; }
  double objective(const Point& z) const override;

  Point sample_point(Rng& rng) const override;

  /// Lipschitz constant of the i-th coordinate component G_i = N e_i (G)_i.
  double component_lipschitz(int i) const;

 protected:
  void eval_impl(const Point& z, Point& out) const override;

 private:
  double eps_;
};

/// Euclidean projection of v onto the unit simplex {u >= 0, sum u = 1}.
/// Exact sort-based threshold method, O(d log d).
std::vector<double> project_simplex(std::span<const double> v);

/// Two-player game min_{x in simplex^n} max_{y in simplex^m}
///   (1/2)<Qx,x> + <Kx,y>,  Q = A^T A (A standard normal), K uniform [-1,1],
/// both seeded. The problem's operator is the forward-backward composite
///   G(z) = z - P(z - lambda * G_smooth(z))
/// with per-block simplex projection P and the smooth saddle operator
/// G_smooth(x,y) = (Qx + K^T y, -Kx); its zeros are the constrained saddles.
class SimplexGame : public Problem {
 public:
  SimplexGame(int n, int m, uint64_t seed, double lambda = 0.01);

  /// Construct from explicit factor A (row-major k x n, Q = A^T A) and
  /// coupling K (row-major m x n). Used for hand-built instances.
  static SimplexGame with_matrices(int n, int m, std::vector<double> A_rows_by_n,
                                   std::vector<double> K, double lambda = 0.01);

  double lambda() const { return lambda_; }
  uint64_t seed() const { return seed_; }
  double lipschitz() const override;
  std::string describe() const override;

  Point sample_point(Rng& rng) const override;  // random feasible point

  /// Smooth part (Qx + K^T y, -Kx) without the projection step.
  Point smooth_operator(const Point& z) const;

  /// The composite residual at z with an explicit splitting parameter.
  Point split_step_operator(const Point& z, double lambda) const;

  /// Project each block of z onto its simplex.
  Point project_feasible(const Point& z) const;

  /// Uniform mixed strategies (1/n, ..., 1/m, ...).
  Point uniform_strategies() const;

  /// Spectral norm of [[Q, K^T], [-K, 0]] by power iteration on M^T M,
  /// to 1e-8 relative. Throws EstimationError after 1e5 iterations.
  double smooth_operator_norm() const;

  const std::vector<double>& Q() const { return Q_; }  // row-major n x n
  const std::vector<double>& K() const { return K_; }  // row-major m x n

  /// Objective of the smooth part, (1/2)<Qx,x> + <Kx,y>.
  double payoff(const Point& z) const;

 protected:
  void eval_impl(const Point& z, Point& out) const override;

 private:
  uint64_t seed_;
  double lambda_;
  std::vector<double> A_;  // k x n, k = n
  std::vector<double> Q_;
  std::vector<double> K_;
  mutable double cached_norm_ = -1.0;
};

}  // namespace saddle
