#pragma once

// Monte Carlo harness: replicas keyed by (experiment_seed, replica_index),
// Wilson score intervals, and the experiments built on top of them.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdp/edge_field.hpp"
#include "sdp/process.hpp"
#include "sdp/renorm.hpp"

namespace sdp {

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95);

// Sufficient statistics of a Bernoulli stream; merging is a plain sum.
struct Tally {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  void add(bool hit) {
    successes += hit ? 1 : 0;
    ++trials;
  }
  Tally& merge(const Tally& other) {
    successes += other.successes;
    trials += other.trials;
    return *this;
  }
  bool operator==(const Tally&) const = default;
};

struct ReplicaRange {
  std::uint64_t experiment_seed = 0;
  std::uint64_t first_replica = 0;
  std::uint64_t count = 0;

  SeedKey key(std::uint64_t i) const { return SeedKey{experiment_seed, first_replica + i}; }
};

struct Estimate {
  double mean = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t replicas = 0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t experiment_seed = 0;
  std::uint64_t first_replica = 0;
  std::uint64_t last_replica = 0;

  // Binomial standard error of the mean.
  double sigma() const;
  // Wilson interval at z standard deviations.
  Interval band(double z) const;
};

Estimate make_estimate(const Tally& tally, const ReplicaRange& range);

using Trial = std::function<bool(SeedKey)>;

// Runs trial(key(i)) for every replica; OpenMP-parallel, schedule-independent.
Estimate event_probability(const Trial& trial, const ReplicaRange& range);
// Serial reference of the same loop.
Estimate event_probability_serial(const Trial& trial, const ReplicaRange& range);

// Mean and variance of an integer-valued statistic across replicas.
struct CountSummary {
  std::uint64_t replicas = 0;
  long double sum = 0;
  long double sum_sq = 0;

  double mean() const;
  double variance() const;  // unbiased
};

// --- one-arm ----------------------------------------------------------------

enum class ArmGeometry : std::uint8_t {
  box,    // B_0(n) in Z^d
  chain,  // the line {(k, 0, ..., 0) : |k| <= n}
};

struct OneArmParams {
  int dim = 2;
  ArmGeometry geometry = ArmGeometry::box;
};

// Fraction of replicas with 0 <-> ∂B_0(n) inside the chosen geometry.
Estimate one_arm_estimate(Probability p, std::int64_t n, const ReplicaRange& range, OneArmParams params = {});
bool origin_reaches_boundary(const Configuration& config, std::int64_t n);

struct PowerFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  std::size_t points_used = 0;
  std::size_t points_dropped = 0;
};

// Least squares of log(estimate) against log(n); non-positive estimates are dropped.
PowerFit exponent_fit(std::span<const std::pair<double, double>> points);

// --- Lemma 1 consistency ----------------------------------------------------

struct Lemma1Params {
  int dim = 2;
  std::int64_t ell = 1;
  std::int64_t L = 2;
  std::int64_t M = 10;
  Probability p{0.5};
};

struct Lemma1Report {
  Estimate left;         // P[count >= M]
  double right = 0.0;    // (1/M) sum_y P[y <-> ∂B_y(L)] = E[count] / M
  double sigma_left = 0.0;
  double sigma_right = 0.0;
  double sigma_combined = 0.0;
  double mean_count = 0.0;
  std::uint64_t box_sites = 0;
  bool holds = false;    // left <= right + 3 sigma_combined
};

Lemma1Report lemma1_consistency(const Lemma1Params& params, const ReplicaRange& range);

// --- coupled scan of omega_q minus the proxy of omega_p -----------------------

struct ScanParams {
  int dim = 2;
  std::int64_t extent = 60;  // simulation region B_0(extent); crossings read on B_0(extent - 1)
  double eps = 0.2;
  double p_c_input = 0.5;
  std::vector<double> p_grid;
  ProxyRule proxy = ProxyRule::boundary();

  void validate() const;
};

struct ScanRow {
  double p = 0.0;
  Estimate crossing;
};

struct ScanReport {
  double q = 0.0;
  std::vector<ScanRow> rows;
  // replica_hits[r][k]: crossing indicator of replica r at grid point k.
  std::vector<std::vector<std::uint8_t>> replica_hits;
  std::uint64_t coupled_violations = 0;  // replicas whose indicator increases along the grid
  bool coupled_non_increasing = false;
  bool frequency_non_increasing = false;
};

// Left-right crossing (axis 0) of the region by open clusters.
bool crosses_region(const Configuration& config);

ScanReport theorem2_scan(const ScanParams& params, const ReplicaRange& range);

}  // namespace sdp
