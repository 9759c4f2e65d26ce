#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "sdp/edge_field.hpp"
#include "sdp/geometry.hpp"

namespace sdp {

// Which object a configuration stands for; carried through serialization.
enum class Layer : std::uint8_t {
  omega_p = 0,
  omega_tilde_p = 1,
  omega_prime_eps = 2,
  omega_tilde_p_eps = 3,
  derived = 4,
};

const char* layer_name(Layer layer);

// Site membership over a region, indexed like the region's sites.
class SiteMask {
 public:
  SiteMask() = default;
  explicit SiteMask(const Region& region) : region_(region), bits_(region.site_count(), 0) {}

  const Region& region() const { return region_; }
  bool test(std::uint64_t idx) const { return bits_[idx] != 0; }
  void set(std::uint64_t idx, bool v = true) { bits_[idx] = v ? 1 : 0; }
  bool contains(const Site& s) const { return region_.contains(s) && test(region_.index_of(s)); }
  void insert(const Site& s);
  std::uint64_t count() const;
  std::vector<std::uint64_t> indices() const;

  bool operator==(const SiteMask&) const = default;

 private:
  Region region_;
  std::vector<std::uint8_t> bits_;
};

// One open/closed bit per edge of a region. Bits live in slots site * d + axis;
// slots whose forward neighbour is outside the region are always closed.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(Region region, Layer layer = Layer::derived);

  const Region& region() const { return region_; }
  int dim() const { return region_.dim(); }
  std::uint64_t edge_count() const { return region_.edge_count(); }

  bool is_open(std::uint64_t site, int axis) const {
    const auto slot = site * static_cast<std::uint64_t>(dim()) + static_cast<std::uint64_t>(axis);
    return (words_[slot >> 6] >> (slot & 63)) & 1U;
  }
  bool is_open(const Edge& edge) const;
  // Precondition: the edge (site, axis) lies inside the region.
  void set(std::uint64_t site, int axis, bool open);
  void set(const Edge& edge, bool open);

  std::uint64_t open_count() const;
  bool subset_of(const Configuration& other) const;

  // Copy of the bits on a sub-region.
  Configuration restrict_to(const Region& sub) const;

  const std::optional<SeedKey>& key() const { return key_; }
  double probability() const { return probability_; }
  Layer layer() const { return layer_; }
  void set_provenance(std::optional<SeedKey> key, double probability, Layer layer) {
    key_ = key;
    probability_ = probability;
    layer_ = layer;
  }
  void set_layer(Layer layer) { layer_ = layer; }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  // Same region and same bits; provenance is ignored.
  bool same_edges(const Configuration& other) const { return region_ == other.region_ && words_ == other.words_; }

 private:
  Region region_;
  std::vector<std::uint64_t> words_;
  std::optional<SeedKey> key_;
  double probability_ = std::numeric_limits<double>::quiet_NaN();
  Layer layer_ = Layer::derived;
};

// Edge-wise maximum; regions must match.
Configuration edge_union(const Configuration& a, const Configuration& b);

// omega^S: closes every edge with an endpoint in the mask.
Configuration close_sites(const Configuration& config, const SiteMask& closed);

}  // namespace sdp
