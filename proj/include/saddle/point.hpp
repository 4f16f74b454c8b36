#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "saddle/errors.hpp"

namespace saddle {

/// A joint primal-dual iterate z = (x, y) stored as one flat vector:
/// the first `primal_dim` coordinates are x, the last `dual_dim` are y.
struct Point {
  std::vector<double> coords;
  int primal_dim = 0;
  int dual_dim = 0;

  Point() = default;
  Point(std::vector<double> c, int n, int m)
      : coords(std::move(c)), primal_dim(n), dual_dim(m) {
    if (n < 1 || m < 1) throw ContractViolation("point dims must be >= 1");
    if (static_cast<int>(coords.size()) != n + m)
      throw ContractViolation("point coords length != n+m");
  }

  static Point zeros(int n, int m) {
    return Point(std::vector<double>(static_cast<size_t>(n + m), 0.0), n, m);
  }

  int dim() const { return primal_dim + dual_dim; }

  double& operator[](size_t i) { return coords[i]; }
  double operator[](size_t i) const { return coords[i]; }

  bool same_shape(const Point& o) const {
    return primal_dim == o.primal_dim && dual_dim == o.dual_dim;
  }

  bool finite() const {
    for (double v : coords)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.coords.size(); ++i) s += a.coords[i] * b.coords[i];
  return s;
}

/// Sum of squared coordinates; the optimality measure ||G(z)||^2.
inline double norm_sq(const Point& a) { return dot(a, a); }

inline double norm(const Point& a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(const Point& a, const Point& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.coords.size(); ++i) {
    double d = a.coords[i] - b.coords[i];
    s += d * d;
  }
  return s;
}

inline Point operator+(const Point& a, const Point& b) {
  Point r = a;
  for (size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
  return r;
}

inline Point operator-(const Point& a, const Point& b) {
  Point r = a;
  for (size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
  return r;
}

inline Point operator*(double s, const Point& a) {
  Point r = a;
  for (double& v : r.coords) v *= s;
  return r;
}

/// r += s*a
inline void axpy(double s, const Point& a, Point& r) {
  for (size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += s * a.coords[i];
}

inline bool bitwise_equal(const Point& a, const Point& b) {
  if (a.coords.size() != b.coords.size()) return false;
  for (size_t i = 0; i < a.coords.size(); ++i)
    if (a.coords[i] != b.coords[i]) return false;
  return true;
}

}  // namespace saddle
