#include "sdp/edge_field.hpp"

#include <cmath>
#include <string>

#include "sdp/errors.hpp"

namespace sdp {

Probability::Probability(double v) : value_(v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("probability " + std::to_string(v) + " outside [0,1]");
}

std::uint64_t Probability::threshold() const {
  // floor(p * 2^64); exact because scaling by a power of two is exact and p < 1.
  if (is_one()) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(std::ldexp(value_, 64));
}

std::uint64_t packed_site_bits(std::span<const std::int64_t> coords) {
  const int d = static_cast<int>(coords.size());
  const int bits = coordinate_bits(d);
  std::uint64_t id = 0;
  for (int i = 0; i < d; ++i) {
    id |= zigzag(coords[static_cast<std::size_t>(i)]) << (4 + i * bits);
  }
  return id;
}

std::uint64_t canonical_edge_id(std::span<const std::int64_t> base, int axis) {
  const int d = static_cast<int>(base.size());
  check_dimension(d);
  if (axis < 0 || axis >= d) throw ConfigError("edge axis out of range");
  for (int i = 0; i < d; ++i) {
    const auto c = base[static_cast<std::size_t>(i)];
    // The tip must also be representable.
    const auto top = i == axis ? c + 1 : c;
    if (c < min_coordinate(d) || top > max_coordinate(d)) {
      throw ExtentError("edge coordinate " + std::to_string(c) + " outside lattice extent");
    }
  }
  return packed_site_bits(base) | static_cast<std::uint64_t>(axis);
}

std::uint64_t canonical_edge_id(const Edge& edge) { return canonical_edge_id(edge.base.coords, edge.axis); }

std::uint64_t edge_label(SeedKey key, std::uint64_t edge_id) {
  return mix64(key.experiment_seed, key.replica_index, edge_id);
}

double edge_value(SeedKey key, const Edge& edge) {
  return std::ldexp(static_cast<double>(edge_label(key, canonical_edge_id(edge)) >> 11), -53);
}

}  // namespace sdp
