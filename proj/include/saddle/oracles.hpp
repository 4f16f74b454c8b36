#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "saddle/problem.hpp"
#include "saddle/rng.hpp"

namespace saddle {

/// Stochastic estimator variants of the saddle operator. All satisfy the
/// unbiasedness condition (1/N) sum_i G_i(z) = E[G_theta(z)|z] = G(z):
///   exact          G_theta = G, zero variance
///   coordinate     G_i = N * e_i (G)_i; variance (N-1)||G||^2 exactly
///   minibatch(b)   mean of b coordinate estimators without replacement
///   additive_noise G + xi, E[xi|z] = 0, E||xi||^2 = sigma^2/(k+1)^p exactly;
///                  p >= 4 keeps the variance summability bound by construction
struct OracleConfig {
  enum class Kind { Exact, Coordinate, Minibatch, AdditiveNoise };
  Kind kind = Kind::Exact;
  int batch = 1;             // minibatch size b, 1 <= b <= N
  double noise_sigma = 1.0;  // sigma
  double noise_decay = 4.0;  // p
  uint64_t stream_seed = 0;  // internal draws (noise vectors, batch members)

  static const char* kind_name(Kind k);
};

/// Deterministic triple stream: (i1,i2,i3) at step k reads stream positions
/// 3k, 3k+1, 3k+2, so replays are exact and positions are never reused.
struct IndexSampler {
  uint64_t seed = 0;
  int N = 1;

  std::array<int, 3> triple(long k) const {
    auto draw = [&](uint64_t pos) {
      return static_cast<int>(Rng::value_at(seed, pos) % static_cast<uint64_t>(N)) + 1;
    };
    uint64_t base = 3 * static_cast<uint64_t>(k);
    return {draw(base), draw(base + 1), draw(base + 2)};
  }
};

struct VarianceEstimate {
  long k = 0;
  double var_zk = 0.0;
  double var_zk_half = 0.0;
  int n_samples = 0;
};

class Oracle {
 public:
  Oracle(OracleConfig cfg, const Problem& problem);

  const OracleConfig& config() const { return cfg_; }

  /// G_theta(z) for component index i (1-based) at iteration k.
  /// Additive noise and minibatch consume draws from the oracle's own stream.
  Point estimate(const Point& z, int i, long k);

  /// E||G_theta(z) - G(z)||^2 in closed form; exact for every variant.
  double variance_closed_form(const Point& z, long k) const;

  /// Monte-Carlo variance estimate with fresh samples on a stream disjoint
  /// from the one the solver consumes (diagnostics never perturb runs).
  double measure_variance_mc(const Point& z, long k, int n_samples,
                             uint64_t probe_seed) const;

  /// Variance at an iterate/half-iterate pair: the closed form where one
  /// exists (all shipped variants), so n_samples only sizes the MC fallback.
  VarianceEstimate measure_variance(const Point& z, const Point& z_half, long k,
                                    int n_samples = 64, uint64_t probe_seed = 0) const;

  /// All variants have exact closed-form variance (additive noise by
  /// construction); the MC path exists as an independent cross-check.
  bool variance_is_closed_form() const { return true; }

  uint64_t draws_consumed() const { return rng_.position(); }

 private:
  Point noise_vector(Rng& rng, long k) const;

  OracleConfig cfg_;
  const Problem* problem_;
  Rng rng_;
};

/// Fitted summability constants for the variance condition
///   Var(z^k) <= C1/(k+1)^4 and E[Var(z^{k+1/2})] <= C2/(k+1)^4.
struct ConditionReport {
  double C1 = 0.0;  // smallest constant covering the z^k sequence
  double C2 = 0.0;  // smallest constant covering the z^{k+1/2} sequence
  bool violated = false;
  double tail_slope = 0.0;  // log-log decay rate of Var(z^k); needs <= -3.5
  std::vector<double> var_zk;    // per-k variance at iterates
  std::vector<double> var_half;  // per-k variance at half iterates
};

/// Fit C1, C2 over a recorded trajectory of (z^k, z^{k+1/2}) pairs and flag
/// the oracle when its variance is not O(k^-4).
ConditionReport check_condition_numbers(const Oracle& oracle,
                                        const std::vector<std::pair<Point, Point>>& trace);

/// Columns: k,var_zk,var_zk_half,bound_C1_over_k4 (the fitted envelope).
void write_variance_csv(const ConditionReport& report, const std::string& path);

}  // namespace saddle
