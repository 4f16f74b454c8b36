#pragma once

#include <memory>
#include <optional>
#include <string>

#include "saddle/point.hpp"
#include "saddle/rng.hpp"

namespace saddle {

/// A saddle problem exposes the saddle operator G(z) = (grad_x f, -grad_y f),
/// its Lipschitz constant R, and (when known) the solution z*. Instances are
/// immutable after construction and safe to share across concurrent runs.
class Problem {
 public:
  Problem(int primal_dim, int dual_dim) : n_(primal_dim), m_(dual_dim) {}
  virtual ~Problem() = default;

  int primal_dim() const { return n_; }
  int dual_dim() const { return m_; }
  /// N = n + m, the number of component operators.
  int dim() const { return n_ + m_; }

  virtual double lipschitz() const = 0;
  virtual std::optional<Point> solution() const { return std::nullopt; }
  virtual std::string describe() const = 0;

  /// Full saddle operator G(z). Validates shape and finiteness.
  Point eval(const Point& z) const {
    check_input(z);
    Point out = Point::zeros(n_, m_);
    eval_impl(z, out);
    return out;
  }

  /// Component operator G_i(z), i in {1..N}, with (1/N) sum_i G_i = G.
  /// The canonical decomposition is coordinate masking: G_i = N * e_i (G)_i.
  Point eval_component(int i, const Point& z) const {
    if (i < 1 || i > dim())
      throw ContractViolation("component index " + std::to_string(i) +
                              " out of range 1.." + std::to_string(dim()));
    Point g = eval(z);
    Point out = Point::zeros(n_, m_);
    out.coords[i - 1] = static_cast<double>(dim()) * g.coords[i - 1];
    return out;
  }

  /// Whether an explicit objective f(x,y) exists (enables finite-difference checks).
  virtual bool has_objective() const { return false; }
  virtual double objective(const Point&) const {
    throw ContractViolation("problem has no explicit objective");
  }

  /// Draw a point from the problem's natural sampling domain
  /// (used by property tests; constrained problems sample feasible points).
  virtual Point sample_point(Rng& rng) const = 0;

 protected:
  virtual void eval_impl(const Point& z, Point& out) const = 0;

  void check_input(const Point& z) const {
    if (z.primal_dim != n_ || z.dual_dim != m_)
      throw ContractViolation("point dims (" + std::to_string(z.primal_dim) + "," +
                              std::to_string(z.dual_dim) + ") do not match problem (" +
                              std::to_string(n_) + "," + std::to_string(m_) + ")");
    if (!z.finite()) throw DomainError("non-finite input point");
  }

 private:
  int n_, m_;
};

}  // namespace saddle
