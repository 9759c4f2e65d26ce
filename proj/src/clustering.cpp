#include "sdp/clustering.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sdp/errors.hpp"

namespace sdp {

ClusterLabeling::ClusterLabeling(Region region, std::vector<std::uint32_t> cluster_of, std::vector<std::uint32_t> roots,
                                 std::vector<std::uint32_t> sizes, std::vector<std::int32_t> bbox_lo,
                                 std::vector<std::int32_t> bbox_hi)
    : region_(std::move(region)),
      cluster_of_(std::move(cluster_of)),
      roots_(std::move(roots)),
      sizes_(std::move(sizes)),
      bbox_lo_(std::move(bbox_lo)),
      bbox_hi_(std::move(bbox_hi)) {
  const auto d = static_cast<std::size_t>(region_.dim());
  if (cluster_of_.size() != region_.site_count() || sizes_.size() != roots_.size() ||
      bbox_lo_.size() != roots_.size() * d || bbox_hi_.size() != roots_.size() * d) {
    throw ConfigError("ClusterLabeling: inconsistent array sizes");
  }
}

ClusterStats ClusterLabeling::stats(std::uint32_t cluster) const {
  const int d = region_.dim();
  std::int64_t diameter = 0;
  for (int axis = 0; axis < d; ++axis) diameter = std::max(diameter, bbox_hi(cluster, axis) - bbox_lo(cluster, axis));
  return ClusterStats{roots_[cluster], sizes_[cluster], diameter};
}

std::int64_t ClusterLabeling::bbox_lo(std::uint32_t cluster, int axis) const {
  return region_.lo(axis) + bbox_lo_[static_cast<std::size_t>(cluster) * static_cast<std::size_t>(region_.dim()) +
                                     static_cast<std::size_t>(axis)];
}

std::int64_t ClusterLabeling::bbox_hi(std::uint32_t cluster, int axis) const {
  return region_.lo(axis) + bbox_hi_[static_cast<std::size_t>(cluster) * static_cast<std::size_t>(region_.dim()) +
                                     static_cast<std::size_t>(axis)];
}

std::uint32_t ClusterLabeling::largest_cluster() const {
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < cluster_count(); ++c) {
    if (sizes_[c] > sizes_[best]) best = c;
  }
  return best;
}

DisjointSets::DisjointSets(std::uint32_t n) : parent_(n), rank_(n, 0) {
  for (std::uint32_t i = 0; i < n; ++i) parent_[i] = i;
}

void DisjointSets::unite(std::uint32_t a, std::uint32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
}

ClusterLabeling label_clusters(const Configuration& config) {
  const Region& region = config.region();
  const std::uint64_t n64 = region.site_count();
  if (n64 > kMaxLabeledSites) throw ExtentError("label_clusters: region has more than 2^32-1 sites");
  const auto n = static_cast<std::uint32_t>(n64);
  const int d = region.dim();

  DisjointSets sets(n);
  std::vector<std::int64_t> c(static_cast<std::size_t>(d));
  if (n > 0) region.coords_at(0, c);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (int axis = 0; axis < d; ++axis) {
      if (c[static_cast<std::size_t>(axis)] < region.hi(axis) && config.is_open(i, axis)) {
        sets.unite(i, i + static_cast<std::uint32_t>(region.stride(axis)));
      }
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++c[static_cast<std::size_t>(a)] <= region.hi(a)) break;
      c[static_cast<std::size_t>(a)] = region.lo(a);
    }
  }

  // Sites are visited in increasing order, so the first site seen in each set
  // is its minimum and becomes the canonical root.
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dense(n, kUnset);
  std::vector<std::uint32_t> cluster_of(n);
  std::vector<std::uint32_t> roots, sizes;
  std::vector<std::int32_t> lo, hi;
  if (n > 0) region.coords_at(0, c);
  std::vector<std::int32_t> off(static_cast<std::size_t>(d), 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto r = sets.find(i);
    std::uint32_t id = dense[r];
    if (id == kUnset) {
      id = static_cast<std::uint32_t>(roots.size());
      dense[r] = id;
      roots.push_back(i);
      sizes.push_back(0);
      lo.insert(lo.end(), off.begin(), off.end());
      hi.insert(hi.end(), off.begin(), off.end());
    }
    cluster_of[i] = id;
    ++sizes[id];
    const auto base = static_cast<std::size_t>(id) * static_cast<std::size_t>(d);
    for (int a = 0; a < d; ++a) {
      const auto v = off[static_cast<std::size_t>(a)];
      lo[base + static_cast<std::size_t>(a)] = std::min(lo[base + static_cast<std::size_t>(a)], v);
      hi[base + static_cast<std::size_t>(a)] = std::max(hi[base + static_cast<std::size_t>(a)], v);
    }
    for (int a = d - 1; a >= 0; --a) {
      auto& o = off[static_cast<std::size_t>(a)];
      if (++o < region.side(a)) break;
      o = 0;
    }
  }
  return ClusterLabeling(region, std::move(cluster_of), std::move(roots), std::move(sizes), std::move(lo),
                         std::move(hi));
}

ArmProbe::ArmProbe(const Configuration& config)
    : config_(&config),
      stamp_(config.region().site_count(), 0),
      origin_(static_cast<std::size_t>(config.dim())),
      coords_(static_cast<std::size_t>(config.dim())) {}

bool ArmProbe::reaches(std::uint64_t site, std::int64_t L) {
  if (L <= 0) return true;
  const Region& region = config_->region();
  const int d = region.dim();
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  region.coords_at(site, origin_);
  queue_.clear();
  queue_.push_back(site);
  stamp_[site] = generation_;
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const auto idx = queue_[head];
    region.coords_at(idx, coords_);
    for (int a = 0; a < d; ++a) {
      const auto ca = coords_[static_cast<std::size_t>(a)];
      const auto oa = origin_[static_cast<std::size_t>(a)];
      const auto st = region.stride(a);
      if (ca < oa + L && config_->is_open(idx, a)) {
        const auto nb = idx + st;
        if (stamp_[nb] != generation_) {
          if (ca + 1 == oa + L) return true;
          stamp_[nb] = generation_;
          queue_.push_back(nb);
        }
      }
      if (ca > oa - L && config_->is_open(idx - st, a)) {
        const auto nb = idx - st;
        if (stamp_[nb] != generation_) {
          if (ca - 1 == oa - L) return true;
          stamp_[nb] = generation_;
          queue_.push_back(nb);
        }
      }
    }
  }
  return false;
}

bool reaches_distance(const Configuration& config, const Site& y, std::int64_t L) {
  const Region ball = Region::box(y, std::max<std::int64_t>(L, 0));
  if (!config.region().contains(ball)) {
    throw ExtentError("reaches_distance: configuration " + config.region().describe() + " does not contain " +
                      ball.describe());
  }
  ArmProbe probe(config);
  return probe.reaches(config.region().index_of(y), L);
}

bool crossing_exists(const ClusterLabeling& labeling, std::span<const std::uint64_t> from,
                     std::span<const std::uint64_t> to) {
  if (from.empty() || to.empty()) {
    diag::warn("crossing_exists called with an empty site set");
    return false;
  }
  std::vector<std::uint8_t> seen(labeling.cluster_count(), 0);
  for (auto s : from) seen[labeling.cluster_of(s)] = 1;
  return std::any_of(to.begin(), to.end(), [&](std::uint64_t s) { return seen[labeling.cluster_of(s)] != 0; });
}

bool crossing_exists(const ClusterLabeling& labeling, std::span<const Site> from, std::span<const Site> to) {
  auto to_indices = [&](std::span<const Site> sites) {
    std::vector<std::uint64_t> out;
    out.reserve(sites.size());
    for (const auto& s : sites) {
      if (!labeling.region().contains(s)) {
        throw ExtentError("crossing_exists: site " + s.to_string() + " outside labeled region");
      }
      out.push_back(labeling.region().index_of(s));
    }
    return out;
  };
  const auto f = to_indices(from);
  const auto t = to_indices(to);
  return crossing_exists(labeling, std::span<const std::uint64_t>(f), std::span<const std::uint64_t>(t));
}

std::vector<ClusterStats> clusters_with_radius_at_least(const ClusterLabeling& labeling, std::int64_t min_radius,
                                                        RadiusConvention conv) {
  std::vector<ClusterStats> out;
  for (std::uint32_t c = 0; c < labeling.cluster_count(); ++c) {
    const auto st = labeling.stats(c);
    if (st.radius(conv) >= min_radius) out.push_back(st);
  }
  // Dense ids are already ordered by root.
  return out;
}

}  // namespace sdp
