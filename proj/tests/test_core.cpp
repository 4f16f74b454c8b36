#include <doctest.h>

#include <cmath>

#include "saddle/problems.hpp"

using namespace saddle;

TEST_CASE("operator value at the saddle and away from it") {
  AlmostBilinear pb(0.01, 1);
  // saddle point at the origin
  Point origin = Point::zeros(1, 1);
  Point g0 = pb.eval(origin);
  CHECK(g0.coords[0] == 0.0);
  CHECK(g0.coords[1] == 0.0);

  // hand-differentiated f = eps x^2/2 + xy - eps y^2/2 at (1,1)
  Point z({1.0, 1.0}, 1, 1);
  Point g = pb.eval(z);
  CHECK(g.coords[0] == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(g.coords[1] == doctest::Approx(-0.99).epsilon(1e-15));
}

TEST_CASE("pure bilinear coupling: G = (y, -x)") {
  // Q = 0 (A = 0), K = identity
  auto game = SimplexGame::with_matrices(2, 2, std::vector<double>(4, 0.0),
                                         {1.0, 0.0, 0.0, 1.0});
  Point z({0.3, 0.7, 0.6, 0.4}, 2, 2);
  Point g = game.smooth_operator(z);
  CHECK(g.coords[0] == doctest::Approx(0.6));
  CHECK(g.coords[1] == doctest::Approx(0.4));
  CHECK(g.coords[2] == doctest::Approx(-0.3));
  CHECK(g.coords[3] == doctest::Approx(-0.7));
}

TEST_CASE("operator norm squared") {
  Point a({0.0, 0.0}, 1, 1);
  CHECK(norm_sq(a) == 0.0);
  Point b({1.01, -0.99}, 1, 1);
  CHECK(norm_sq(b) == doctest::Approx(2.0002).epsilon(1e-15));
  Point c({3.0, 4.0}, 1, 1);
  CHECK(norm_sq(c) == 25.0);
}

TEST_CASE("dimension and finiteness contracts") {
  AlmostBilinear pb(0.01, 1);
  Point wrong({1.0, 2.0, 3.0, 4.0}, 2, 2);
  CHECK_THROWS_AS(pb.eval(wrong), ContractViolation);
  Point inf_pt({1.0, std::numeric_limits<double>::infinity()}, 1, 1);
  CHECK_THROWS_AS(pb.eval(inf_pt), DomainError);
  Point ok({1.0, 1.0}, 1, 1);
  CHECK_THROWS_AS(pb.eval_component(0, ok), ContractViolation);
  CHECK_THROWS_AS(pb.eval_component(3, ok), ContractViolation);
}

TEST_CASE("coordinate components and the averaging identity") {
  AlmostBilinear pb(0.01, 1);
  Point z({1.0, 1.0}, 1, 1);
  Point g1 = pb.eval_component(1, z);
  CHECK(g1.coords[0] == doctest::Approx(2.02).epsilon(1e-15));
  CHECK(g1.coords[1] == 0.0);
  Point g2 = pb.eval_component(2, z);
  CHECK(g2.coords[0] == 0.0);
  CHECK(g2.coords[1] == doctest::Approx(-1.98).epsilon(1e-15));

  // (1/N) sum_i G_i == G within N*eps*||G||
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Point p = pb.sample_point(rng);
    Point g = pb.eval(p);
    Point acc = Point::zeros(1, 1);
    for (int i = 1; i <= pb.dim(); ++i) acc = acc + pb.eval_component(i, p);
    double tol = pb.dim() * 2.3e-16 * std::max(1.0, norm(g));
    for (size_t c = 0; c < acc.coords.size(); ++c)
      CHECK(std::abs(acc.coords[c] / pb.dim() - g.coords[c]) <= tol);
  }
}

TEST_CASE("Lipschitz sampling on both problems") {
  Rng rng(5);
  AlmostBilinear ab(0.01, 3);
  SimplexGame game(6, 3, 99, 0.01);
  const Problem* problems[] = {&ab, &game};
  for (const Problem* pb : problems) {
    double R = pb->lipschitz();
    for (int i = 0; i < 1000; ++i) {
      Point z1 = pb->sample_point(rng);
      Point z2 = pb->sample_point(rng);
      double lhs = norm(pb->eval(z1) - pb->eval(z2));
      double rhs = R * std::sqrt(dist_sq(z1, z2)) * (1.0 + 1e-9);
      CHECK(lhs <= rhs);
    }
  }
}

TEST_CASE("monotonicity sampling on convex-concave problems") {
  Rng rng(6);
  AlmostBilinear ab(0.01, 2);
  for (int i = 0; i < 1000; ++i) {
    Point z1 = ab.sample_point(rng);
    Point z2 = ab.sample_point(rng);
    Point d = z1 - z2;
    double ip = dot(ab.eval(z1) - ab.eval(z2), d);
    CHECK(ip >= -1e-9 * norm_sq(d));
    // closed form: <G(z1)-G(z2), z1-z2> = eps ||z1-z2||^2 exactly
    CHECK(ip == doctest::Approx(0.01 * norm_sq(d)).epsilon(1e-10));
  }
}

TEST_CASE("operator matches central finite differences of f") {
  // d/dx and -d/dy of the explicit objective, step 1e-6, 100 random points
  AlmostBilinear pb(0.37, 2);
  Rng rng(7);
  const double h = 1e-6;
  for (int t = 0; t < 100; ++t) {
    Point z = pb.sample_point(rng);
    Point g = pb.eval(z);
    for (int i = 0; i < pb.dim(); ++i) {
      Point zp = z, zm = z;
      zp.coords[i] += h;
      zm.coords[i] -= h;
      double fd = (pb.objective(zp) - pb.objective(zm)) / (2.0 * h);
      double expected = i < pb.primal_dim() ? g.coords[i] : -g.coords[i];
      CHECK(fd == doctest::Approx(expected).epsilon(1e-5));
    }
  }
}
