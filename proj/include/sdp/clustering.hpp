#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdp/configuration.hpp"

namespace sdp {

// How a cluster's radius is read off its l-inf diameter.
enum class RadiusConvention : std::uint8_t {
  half_diameter,  // radius = floor(diameter / 2)
  diameter,       // radius = diameter
};

constexpr std::int64_t cluster_radius(std::int64_t linf_diameter, RadiusConvention conv) {
  return conv == RadiusConvention::half_diameter ? linf_diameter / 2 : linf_diameter;
}

struct ClusterStats {
  std::uint32_t root = 0;  // minimum site index in the cluster
  std::uint32_t size = 0;
  std::int64_t linf_diameter = 0;

  std::int64_t radius(RadiusConvention conv = RadiusConvention::half_diameter) const {
    return cluster_radius(linf_diameter, conv);
  }
  bool operator==(const ClusterStats&) const = default;
};

// Partition of a region's sites into open clusters, with per-cluster size and
// bounding box. Clusters are numbered 0..k-1 in order of their minimum site.
class ClusterLabeling {
 public:
  ClusterLabeling() = default;
  // Raw constructor; `cluster_of[i]` is the dense cluster id of site i. The
  // bounding boxes are offsets from region.lo(), laid out cluster * d + axis.
  ClusterLabeling(Region region, std::vector<std::uint32_t> cluster_of, std::vector<std::uint32_t> roots,
                  std::vector<std::uint32_t> sizes, std::vector<std::int32_t> bbox_lo,
                  std::vector<std::int32_t> bbox_hi);

  const Region& region() const { return region_; }
  std::uint32_t cluster_count() const { return static_cast<std::uint32_t>(roots_.size()); }
  std::uint32_t cluster_of(std::uint64_t site) const { return cluster_of_[site]; }
  std::uint32_t root(std::uint64_t site) const { return roots_[cluster_of_[site]]; }
  bool connected(std::uint64_t a, std::uint64_t b) const { return cluster_of_[a] == cluster_of_[b]; }

  ClusterStats stats(std::uint32_t cluster) const;
  std::int64_t bbox_lo(std::uint32_t cluster, int axis) const;
  std::int64_t bbox_hi(std::uint32_t cluster, int axis) const;
  std::span<const std::uint32_t> assignment() const { return cluster_of_; }

  std::uint32_t largest_cluster() const;

  bool operator==(const ClusterLabeling&) const = default;

 private:
  Region region_;
  std::vector<std::uint32_t> cluster_of_;
  std::vector<std::uint32_t> roots_;
  std::vector<std::uint32_t> sizes_;
  std::vector<std::int32_t> bbox_lo_;
  std::vector<std::int32_t> bbox_hi_;
};

// Union by rank with path halving over 32-bit site indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::uint32_t n);

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b);

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

// Regions above this many sites are refused by the labeler.
inline constexpr std::uint64_t kMaxLabeledSites = 0xFFFFFFFFULL;

ClusterLabeling label_clusters(const Configuration& config);

// y <-> ∂B_y(L) using open edges of B_y(L) only. Reusable scratch for repeated queries.
class ArmProbe {
 public:
  explicit ArmProbe(const Configuration& config);

  // Precondition: B_site(L) inside the configuration region (checked by the free function).
  bool reaches(std::uint64_t site, std::int64_t L);

 private:
  const Configuration* config_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t generation_ = 0;
  std::vector<std::uint64_t> queue_;
  std::vector<std::int64_t> origin_;
  std::vector<std::int64_t> coords_;
};

bool reaches_distance(const Configuration& config, const Site& y, std::int64_t L);

// True iff some cluster meets both site sets. An empty argument yields false
// and a warning.
bool crossing_exists(const ClusterLabeling& labeling, std::span<const std::uint64_t> from,
                     std::span<const std::uint64_t> to);
bool crossing_exists(const ClusterLabeling& labeling, std::span<const Site> from, std::span<const Site> to);

// Clusters with radius >= min_radius under `conv`, sorted by root.
std::vector<ClusterStats> clusters_with_radius_at_least(const ClusterLabeling& labeling, std::int64_t min_radius,
                                                        RadiusConvention conv = RadiusConvention::half_diameter);

}  // namespace sdp
