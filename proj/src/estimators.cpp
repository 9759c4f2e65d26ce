#include "sdp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdp/clustering.hpp"
#include "sdp/errors.hpp"
#include "sdp/realize.hpp"

namespace sdp {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw ConfigError("wilson_interval: no trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp so that low <= phat <= high survives rounding at phat = 0 or 1.
  return Interval{std::min(std::max(0.0, center - half), phat), std::max(std::min(1.0, center + half), phat)};
}

double Estimate::sigma() const {
  if (replicas == 0) return 0.0;
  return std::sqrt(mean * (1.0 - mean) / static_cast<double>(replicas));
}

Interval Estimate::band(double z) const { return wilson_interval(successes, replicas, z); }

Estimate make_estimate(const Tally& tally, const ReplicaRange& range) {
  if (tally.trials == 0) throw ConfigError("estimate needs at least one replica");
  Estimate e;
  e.successes = tally.successes;
  e.replicas = tally.trials;
  e.mean = static_cast<double>(tally.successes) / static_cast<double>(tally.trials);
  const auto ci = wilson_interval(tally.successes, tally.trials);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.experiment_seed = range.experiment_seed;
  e.first_replica = range.first_replica;
  e.last_replica = range.first_replica + tally.trials - 1;
  return e;
}

Estimate event_probability(const Trial& trial, const ReplicaRange& range) {
  if (range.count == 0) throw ConfigError("replicas must be >= 1");
  std::uint64_t hits = 0;
  const auto n = static_cast<std::int64_t>(range.count);
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : hits)
  for (std::int64_t i = 0; i < n; ++i) {
    if (trial(range.key(static_cast<std::uint64_t>(i)))) ++hits;
  }
  return make_estimate(Tally{hits, range.count}, range);
}

Estimate event_probability_serial(const Trial& trial, const ReplicaRange& range) {
  if (range.count == 0) throw ConfigError("replicas must be >= 1");
  Tally t;
  for (std::uint64_t i = 0; i < range.count; ++i) t.add(trial(range.key(i)));
  return make_estimate(t, range);
}

double CountSummary::mean() const { return replicas ? static_cast<double>(sum / replicas) : 0.0; }

double CountSummary::variance() const {
  if (replicas < 2) return 0.0;
  const long double n = replicas;
  const long double m = sum / n;
  return static_cast<double>(std::max(0.0L, (sum_sq - n * m * m) / (n - 1)));
}

// ---------------------------------------------------------------------------

bool origin_reaches_boundary(const Configuration& config, std::int64_t n) {
  const Region& region = config.region();
  const Site origin = Site::origin(region.dim());
  if (n <= 0) return true;
  const auto labeling = label_clusters(config);
  const auto target = labeling.cluster_of(region.index_of(origin));
  const auto rim = sites_at_distance(region, origin, n);
  return std::any_of(rim.begin(), rim.end(), [&](std::uint64_t s) { return labeling.cluster_of(s) == target; });
}

namespace {

Region arm_region(std::int64_t n, OneArmParams params) {
  if (params.geometry == ArmGeometry::box) return Region::box(Site::origin(params.dim), n);
  std::vector<std::int64_t> lo(static_cast<std::size_t>(params.dim), 0), hi(static_cast<std::size_t>(params.dim), 0);
  lo[0] = -n;
  hi[0] = n;
  return Region::from_bounds(std::move(lo), std::move(hi));
}

}  // namespace

Estimate one_arm_estimate(Probability p, std::int64_t n, const ReplicaRange& range, OneArmParams params) {
  if (range.count == 0) throw ConfigError("one_arm_estimate: replicas must be >= 1");
  if (n < 0) throw ConfigError("one_arm_estimate: n must be >= 0");
  const Region region = arm_region(n, params);
  return event_probability(
      [&](SeedKey key) { return origin_reaches_boundary(realize_serial(key, region, p), n); }, range);
}

PowerFit exponent_fit(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> logs;
  PowerFit fit;
  for (const auto& [n, est] : points) {
    if (!(est > 0.0) || !(n > 0.0)) {
      diag::warn("exponent_fit: dropping point n=" + std::to_string(n) + " with estimate " + std::to_string(est));
      ++fit.points_dropped;
      continue;
    }
    logs.emplace_back(std::log(n), std::log(est));
  }
  if (logs.size() < 3) throw ConfigError("exponent_fit needs at least 3 positive points");
  const double k = static_cast<double>(logs.size());
  double mx = 0, my = 0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw ConfigError("exponent_fit: all n values coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (const auto& [x, y] : logs) {
    const double r = y - (fit.intercept + fit.slope * x);
    ssr += r * r;
  }
  fit.slope_stderr = std::sqrt(ssr / (k - 2.0) / sxx);
  fit.points_used = logs.size();
  return fit;
}

// ---------------------------------------------------------------------------

Lemma1Report lemma1_consistency(const Lemma1Params& params, const ReplicaRange& range) {
  if (range.count == 0) throw ConfigError("lemma1_consistency: replicas must be >= 1");
  if (params.M < 1) throw ConfigError("lemma1_consistency: M must be >= 1");
  const Site x = Site::origin(params.dim);
  const Region support = arm_support(x, params.ell, params.L);
  const Region box = slab_box(x, params.ell, params.L);

  const auto n = static_cast<std::int64_t>(range.count);
  std::vector<std::uint64_t> counts(range.count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto ambient = realize(range.key(static_cast<std::uint64_t>(i)), support, params.p);
    counts[static_cast<std::size_t>(i)] = arm_sites(ambient, box, params.L).count();
  }

  Tally over;
  CountSummary summary;
  for (auto c : counts) {
    over.add(static_cast<std::int64_t>(c) >= params.M);
    ++summary.replicas;
    summary.sum += c;
    summary.sum_sq += static_cast<long double>(c) * c;
  }

  Lemma1Report rep;
  rep.left = make_estimate(over, range);
  rep.box_sites = box.site_count();
  rep.mean_count = summary.mean();
  const double M = static_cast<double>(params.M);
  const double R = static_cast<double>(range.count);
  rep.right = rep.mean_count / M;
  rep.sigma_left = rep.left.sigma();
  rep.sigma_right = std::sqrt(summary.variance() / R) / M;
  rep.sigma_combined = std::hypot(rep.sigma_left, rep.sigma_right);
  rep.holds = rep.left.mean <= rep.right + 3.0 * rep.sigma_combined;
  return rep;
}

// ---------------------------------------------------------------------------

void ScanParams::validate() const {
  check_dimension(dim);
  if (extent < 1) throw ConfigError("scan extent must be >= 1");
  if (!(eps >= 0.0) || !(p_c_input > 0.0 && p_c_input < 1.0) || p_c_input + eps > 1.0) {
    throw ConfigError("scan needs p_c in (0,1) and p_c + eps <= 1");
  }
  if (p_grid.empty()) throw ConfigError("scan p grid is empty");
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    if (!(p_grid[k] > p_c_input)) {
      throw ConfigError("scan grid value " + std::to_string(p_grid[k]) + " is not above p_c = " +
                        std::to_string(p_c_input));
    }
    if (p_grid[k] > 1.0) throw ConfigError("scan grid value above 1");
    if (k > 0 && !(p_grid[k] > p_grid[k - 1])) throw ConfigError("scan grid must be strictly increasing");
  }
}

bool crosses_region(const Configuration& config) {
  const Region& region = config.region();
  const auto labeling = label_clusters(config);
  std::vector<std::uint8_t> left(labeling.cluster_count(), 0);
  // Axis 0 is most significant: the first stride(0) sites form the face at
  // lo(0) and the last stride(0) sites the face at hi(0).
  for (std::uint64_t i = 0; i < region.stride(0); ++i) left[labeling.cluster_of(i)] = 1;
  const auto last = region.site_count() - region.stride(0);
  for (std::uint64_t i = last; i < region.site_count(); ++i) {
    if (left[labeling.cluster_of(i)]) return true;
  }
  return false;
}

ScanReport theorem2_scan(const ScanParams& params, const ReplicaRange& range) {
  params.validate();
  if (range.count == 0) throw ConfigError("theorem2_scan: replicas must be >= 1");
  const Region region = Region::box(Site::origin(params.dim), params.extent);
  // Under the boundary rule every face site belongs to the proxy, so crossings
  // are read on the box one layer in.
  const Region interior = Region::box(Site::origin(params.dim), std::max<std::int64_t>(params.extent - 1, 0));
  const double q = std::min(1.0, params.p_c_input + params.eps);
  const auto K = params.p_grid.size();

  ScanReport rep;
  rep.q = q;
  rep.replica_hits.assign(range.count, std::vector<std::uint8_t>(K, 0));
  const auto n = static_cast<std::int64_t>(range.count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < n; ++r) {
    const auto key = range.key(static_cast<std::uint64_t>(r));
    const auto omega_q = realize(key, region, Probability(q));
    for (std::size_t k = 0; k < K; ++k) {
      const auto omega_p = realize(key, region, Probability(params.p_grid[k]));
      const auto proxy = infinite_cluster_proxy(omega_p, params.proxy);
      rep.replica_hits[static_cast<std::size_t>(r)][k] = crosses_region(subtract_infinite_cluster(omega_q, proxy).restrict_to(interior));
    }
  }

  std::vector<Tally> tallies(K);
  for (const auto& hits : rep.replica_hits) {
    bool ok = true;
    for (std::size_t k = 0; k < K; ++k) {
      tallies[k].add(hits[k] != 0);
      if (k > 0 && hits[k] > hits[k - 1]) ok = false;
    }
    if (!ok) ++rep.coupled_violations;
  }
  rep.frequency_non_increasing = true;
  for (std::size_t k = 0; k < K; ++k) {
    rep.rows.push_back(ScanRow{params.p_grid[k], make_estimate(tallies[k], range)});
    if (k > 0 && tallies[k].successes > tallies[k - 1].successes) rep.frequency_non_increasing = false;
  }
  rep.coupled_non_increasing = rep.coupled_violations == 0;
  return rep;
}

}  // namespace sdp
