#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>

#include "saddle/oracles.hpp"
#include "saddle/problems.hpp"

using namespace saddle;

TEST_CASE("sample_triple is replayable and uses disjoint stream positions") {
  IndexSampler s{99, 5};
  auto t1 = s.triple(0);
  auto t2 = s.triple(0);
  CHECK(t1 == t2);
  for (auto i : t1) {
    CHECK(i >= 1);
    CHECK(i <= 5);
  }

  IndexSampler one{7, 1};
  for (long k = 0; k < 100; ++k) {
    auto t = one.triple(k);
    CHECK(t == std::array<int, 3>{1, 1, 1});
  }

  // positions 3k..3k+2 never overlap between steps: the raw draws at a given
  // position are identical no matter which step asked first
  IndexSampler audit{1234, 17};
  std::map<uint64_t, uint64_t> seen;
  for (long k = 0; k < 10000; ++k) {
    for (uint64_t j = 0; j < 3; ++j) {
      uint64_t pos = 3 * static_cast<uint64_t>(k) + j;
      uint64_t raw = Rng::value_at(audit.seed, pos);
      auto [it, inserted] = seen.emplace(pos, raw);
      CHECK(inserted);  // each position visited exactly once
    }
  }
  CHECK(seen.size() == 30000);
}

TEST_CASE("index marginals are uniform within 5 sigma") {
  IndexSampler s{2024, 10};
  std::vector<long> counts(11, 0);
  const long draws = 100000;
  long total = 0;
  for (long k = 0; k < draws / 3 + 1 && total < draws; ++k) {
    auto t = s.triple(k);
    for (int i : t) {
      if (total >= draws) break;
      counts[static_cast<size_t>(i)]++;
      ++total;
    }
  }
  double p = 1.0 / 10.0;
  double sigma = std::sqrt(draws * p * (1 - p));
  for (int i = 1; i <= 10; ++i)
    CHECK(std::abs(counts[static_cast<size_t>(i)] - draws * p) <= 5.0 * sigma);
}

TEST_CASE("estimate variants against the core operator") {
  AlmostBilinear pb(0.01, 1);
  Point z({1.0, 1.0}, 1, 1);
  Point g = pb.eval(z);

  Oracle exact({OracleConfig::Kind::Exact}, pb);
  CHECK(bitwise_equal(exact.estimate(z, 1, 0), g));

  Oracle coord({OracleConfig::Kind::Coordinate}, pb);
  Point c1 = coord.estimate(z, 1, 0);
  CHECK(c1.coords[0] == doctest::Approx(2.02).epsilon(1e-15));
  CHECK(c1.coords[1] == 0.0);

  OracleConfig mb_full;
  mb_full.kind = OracleConfig::Kind::Minibatch;
  mb_full.batch = 2;
  Oracle full(mb_full, pb);
  CHECK(bitwise_equal(full.estimate(z, 1, 0), g));  // b = N collapses to exact

  OracleConfig bad;
  bad.kind = OracleConfig::Kind::Minibatch;
  bad.batch = 3;
  CHECK_THROWS_AS(Oracle(bad, pb), ConfigError);
}

TEST_CASE("unbiasedness over the full sample space") {
  AlmostBilinear pb(0.3, 2);  // N = 4
  Rng rng(40);
  Point z = pb.sample_point(rng);
  Point g = pb.eval(z);
  const int N = pb.dim();

  Oracle coord({OracleConfig::Kind::Coordinate}, pb);
  Point acc = Point::zeros(2, 2);
  for (int i = 1; i <= N; ++i) acc = acc + coord.estimate(z, i, 0);
  for (int c = 0; c < N; ++c)
    CHECK(acc.coords[c] / N == doctest::Approx(g.coords[c]).epsilon(1e-14));

  // additive noise: empirical mean within 3 sigma Monte-Carlo bands
  OracleConfig an;
  an.kind = OracleConfig::Kind::AdditiveNoise;
  an.noise_sigma = 0.5;
  an.noise_decay = 0.0;  // constant noise for this check
  an.stream_seed = 77;
  Oracle noisy(an, pb);
  const int S = 20000;
  Point mean = Point::zeros(2, 2);
  for (int s = 0; s < S; ++s) axpy(1.0 / S, noisy.estimate(z, 1, 0), mean);
  double coord_sd = 0.5 / std::sqrt(static_cast<double>(N));
  double band = 3.0 * coord_sd / std::sqrt(static_cast<double>(S));
  for (int c = 0; c < N; ++c) CHECK(std::abs(mean.coords[c] - g.coords[c]) <= band);
}

TEST_CASE("variance closed forms and Monte-Carlo cross-check") {
  AlmostBilinear pb(0.01, 1);
  Point z({1.0, 1.0}, 1, 1);
  double gsq = norm_sq(pb.eval(z));

  Oracle exact({OracleConfig::Kind::Exact}, pb);
  CHECK(exact.variance_closed_form(z, 0) == 0.0);

  Oracle coord({OracleConfig::Kind::Coordinate}, pb);
  // (1/2)(2.02^2 + 1.98^2) - 2.0002 = 2.0002 = (N-1)||G||^2
  CHECK(coord.variance_closed_form(z, 0) == doctest::Approx(2.0002).epsilon(1e-14));
  CHECK(coord.variance_closed_form(z, 0) == doctest::Approx(gsq).epsilon(1e-14));
  Point origin = Point::zeros(1, 1);
  CHECK(coord.variance_closed_form(origin, 0) == 0.0);

  double mc = coord.measure_variance_mc(z, 0, 20000, 555);
  CHECK(mc == doctest::Approx(2.0002).epsilon(0.05));

  OracleConfig an;
  an.kind = OracleConfig::Kind::AdditiveNoise;
  an.noise_sigma = 1.0;
  an.noise_decay = 4.0;
  Oracle noisy(an, pb);
  CHECK(noisy.variance_closed_form(z, 0) == 1.0);
  CHECK(noisy.variance_closed_form(z, 9) == doctest::Approx(1.0 / 1e4).epsilon(1e-12));
  double mc2 = noisy.measure_variance_mc(z, 0, 40000, 556);
  CHECK(mc2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("condition number bound for the coordinate oracle") {
  // (1/N) sum ||G_i||^2 = N ||G||^2 exactly, so C_bar = N
  AlmostBilinear pb(0.2, 3);
  Rng rng(41);
  const int N = pb.dim();
  for (int t = 0; t < 50; ++t) {
    Point z = pb.sample_point(rng);
    double gsq = norm_sq(pb.eval(z));
    double sum = 0.0;
    for (int i = 1; i <= N; ++i) sum += norm_sq(pb.eval_component(i, z));
    CHECK(sum / N == doctest::Approx(N * gsq).epsilon(1e-12));
  }
}

TEST_CASE("component Lipschitz constants on a linear problem") {
  AlmostBilinear pb(0.5, 2);
  Rng rng(42);
  const int N = pb.dim();
  for (int t = 0; t < 1000; ++t) {
    Point z1 = pb.sample_point(rng);
    Point z2 = pb.sample_point(rng);
    double dz = std::sqrt(dist_sq(z1, z2));
    for (int i = 1; i <= N; ++i) {
      double lhs = norm(pb.eval_component(i, z1) - pb.eval_component(i, z2));
      CHECK(lhs <= pb.component_lipschitz(i) * dz * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("replayability of oracle streams") {
  AlmostBilinear pb(0.01, 2);
  OracleConfig an;
  an.kind = OracleConfig::Kind::AdditiveNoise;
  an.stream_seed = 31337;
  Oracle o1(an, pb), o2(an, pb);
  Rng rng(43);
  Point z = pb.sample_point(rng);
  for (long k = 0; k < 50; ++k)
    CHECK(bitwise_equal(o1.estimate(z, 1, k), o2.estimate(z, 1, k)));
}

TEST_CASE("measure_variance pairs iterate and half-iterate values") {
  AlmostBilinear pb(0.01, 1);
  Oracle coord({OracleConfig::Kind::Coordinate}, pb);
  Point z({1.0, 1.0}, 1, 1);
  Point zh({0.5, 0.5}, 1, 1);
  auto est = coord.measure_variance(z, zh, 3);
  CHECK(est.k == 3);
  CHECK(est.var_zk == coord.variance_closed_form(z, 3));
  CHECK(est.var_zk_half == coord.variance_closed_form(zh, 3));
  CHECK(est.var_zk >= 0.0);
  Oracle exact({OracleConfig::Kind::Exact}, pb);
  CHECK(exact.measure_variance(z, zh, 0).var_zk == 0.0);
}

TEST_CASE("variance trace export") {
  AlmostBilinear pb(0.01, 1);
  OracleConfig an;
  an.kind = OracleConfig::Kind::AdditiveNoise;
  an.noise_sigma = 1.0;
  an.noise_decay = 4.0;
  Oracle noisy(an, pb);
  std::vector<std::pair<Point, Point>> traj;
  for (long k = 0; k < 32; ++k)
    traj.push_back({Point({1.0, 1.0}, 1, 1), Point({0.5, 0.5}, 1, 1)});
  auto rep = check_condition_numbers(noisy, traj);
  std::string path = "/tmp/saddle_variance_test.csv";
  write_variance_csv(rep, path);
  std::ifstream in(path);
  REQUIRE(in);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,var_zk,var_zk_half,bound_C1_over_k4");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 32);
}

TEST_CASE("summability condition fits and flags") {
  AlmostBilinear pb(0.01, 1);
  Oracle exact({OracleConfig::Kind::Exact}, pb);
  Oracle coord({OracleConfig::Kind::Coordinate}, pb);
  OracleConfig an;
  an.kind = OracleConfig::Kind::AdditiveNoise;
  an.noise_sigma = 1.0;
  an.noise_decay = 4.0;
  Oracle noisy(an, pb);

  // a synthetic converging trajectory with ||G(z^k)||^2 = Theta(k^-2):
  // scale z by 1/(k+1) so the linear operator shrinks accordingly
  std::vector<std::pair<Point, Point>> traj;
  for (long k = 0; k < 400; ++k) {
    double s = 1.0 / static_cast<double>(k + 1);
    traj.push_back({Point({s, s}, 1, 1), Point({0.9 * s, 0.9 * s}, 1, 1)});
  }

  auto rep_exact = check_condition_numbers(exact, traj);
  CHECK(rep_exact.C1 == 0.0);
  CHECK(rep_exact.C2 == 0.0);
  CHECK(!rep_exact.violated);

  // coordinate variance scales with ||G||^2 ~ k^-2: NOT summable, flagged
  auto rep_coord = check_condition_numbers(coord, traj);
  CHECK(rep_coord.violated);
  CHECK(rep_coord.tail_slope > -3.0);

  // additive noise with p = 4 fits C1 = sigma^2 = 1 exactly
  auto rep_noise = check_condition_numbers(noisy, traj);
  CHECK(!rep_noise.violated);
  CHECK(rep_noise.C1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep_noise.C1 <= 1.0 + 1e-12);
}
