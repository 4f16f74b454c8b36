#include <doctest.h>

#include <cmath>

#include "saddle/problems.hpp"

using namespace saddle;

TEST_CASE("simplex projection basics") {
  auto p1 = project_simplex(std::vector<double>{0.5, 0.5});
  CHECK(p1[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p1[1] == doctest::Approx(0.5).epsilon(1e-15));

  auto p2 = project_simplex(std::vector<double>{1.0, 1.0});
  CHECK(p2[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p2[1] == doctest::Approx(0.5).epsilon(1e-15));

  auto p3 = project_simplex(std::vector<double>{2.0, 0.0});
  CHECK(p3[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p3[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projection against brute-force grid on the 2-simplex") {
  // the projection of v onto {x >= 0, x1 + x2 = 1} minimizes ||u - v||;
  // scan u = (t, 1-t) on a fine grid as the independent oracle
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v = {rng.next_uniform(-2.0, 3.0), rng.next_uniform(-2.0, 3.0)};
    auto p = project_simplex(v);
    double best_t = 0.0, best = 1e300;
    for (int i = 0; i <= 1000000; ++i) {
      double t = i * 1e-6;
      double d = (t - v[0]) * (t - v[0]) + (1.0 - t - v[1]) * (1.0 - t - v[1]);
      if (d < best) {
        best = d;
        best_t = t;
      }
    }
    CHECK(std::abs(p[0] - best_t) <= 1e-6 + 1e-9);
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[0] >= 0.0);
    CHECK(p[1] >= 0.0);
  }
}

TEST_CASE("projection idempotence and nonexpansiveness") {
  Rng rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 7);
    std::vector<double> u(d), v(d);
    for (auto& x : u) x = rng.next_uniform(-3.0, 3.0);
    for (auto& x : v) x = rng.next_uniform(-3.0, 3.0);
    auto pu = project_simplex(u);
    auto pv = project_simplex(v);
    // idempotence, bitwise
    auto ppu = project_simplex(pu);
    for (int i = 0; i < d; ++i) CHECK(ppu[i] == pu[i]);
    // nonexpansiveness
    double dp = 0.0, dv = 0.0;
    for (int i = 0; i < d; ++i) {
      dp += (pu[i] - pv[i]) * (pu[i] - pv[i]);
      dv += (u[i] - v[i]) * (u[i] - v[i]);
    }
    CHECK(dp <= dv * (1.0 + 1e-12));
    // feasibility
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      CHECK(pu[i] >= 0.0);
      s += pu[i];
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("seeded game data is reproducible and Q is PSD") {
  SimplexGame g1(8, 3, 12345, 0.01);
  SimplexGame g2(8, 3, 12345, 0.01);
  CHECK(g1.Q() == g2.Q());  // bitwise
  CHECK(g1.K() == g2.K());
  SimplexGame g3(8, 3, 54321, 0.01);
  CHECK(g1.Q() != g3.Q());

  // sampled Rayleigh quotients of Q = A^T A stay >= -1e-10
  Rng rng(3);
  int n = 8;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.next_normal();
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += g1.Q()[i * n + j] * v[j];
      num += v[i] * s;
      den += v[i] * v[i];
    }
    CHECK(num / den >= -1e-10);
  }
}

TEST_CASE("composite residual vanishes at feasible smooth saddles") {
  // Q = 0, K = 0: the operator reduces to the pure projection residual
  auto zero_game = SimplexGame::with_matrices(2, 2, std::vector<double>(4, 0.0),
                                              std::vector<double>(4, 0.0));
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    Point z = zero_game.sample_point(rng);
    CHECK(norm_sq(zero_game.eval(z)) <= 1e-24);
  }
}

TEST_CASE("lipschitz bounds") {
  AlmostBilinear flat(0.0, 1);
  CHECK(flat.lipschitz() == 1.0);
  AlmostBilinear ab(0.01, 1);
  CHECK(ab.lipschitz() == doctest::Approx(std::sqrt(1.0001)).epsilon(1e-15));

  // orthogonal coupling block: ||M|| = 1 exactly
  auto rot = SimplexGame::with_matrices(2, 2, std::vector<double>(4, 0.0),
                                        {1.0, 0.0, 0.0, 1.0});
  CHECK(rot.smooth_operator_norm() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(rot.lipschitz() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("game operator monotonicity on the feasible set") {
  SimplexGame game(6, 3, 99, 0.01);
  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    Point z1 = game.sample_point(rng);
    Point z2 = game.sample_point(rng);
    Point d = z1 - z2;
    double ip = dot(game.eval(z1) - game.eval(z2), d);
    CHECK(ip >= -1e-9 * std::max(1.0, norm_sq(d)));
  }
}

TEST_CASE("split step operator exposes lambda") {
  SimplexGame game(4, 2, 31, 0.01);
  Point z = game.uniform_strategies();
  Point r1 = game.split_step_operator(z, 0.01);
  Point r2 = game.eval(z);
  CHECK(bitwise_equal(r1, r2));
  Point r3 = game.split_step_operator(z, 0.5);
  CHECK(!bitwise_equal(r1, r3));
}
