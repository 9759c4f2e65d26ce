#pragma once

// Counter-based uniform edge labels. Every configuration omega_p is the set of
// edges whose label falls below p, so all p share one monotone coupling and no
// randomness is ever stored.

#include <cstdint>
#include <span>

#include "sdp/geometry.hpp"

namespace sdp {

struct SeedKey {
  std::uint64_t experiment_seed = 0;
  std::uint64_t replica_index = 0;

  bool operator==(const SeedKey&) const = default;
};

// omega'_eps draws from replica_index + kRecoveryReplicaOffset.
inline constexpr std::uint64_t kRecoveryReplicaOffset = 0x8000000000000000ULL;

constexpr SeedKey recovery_key(SeedKey key) {
  return SeedKey{key.experiment_seed, key.replica_index + kRecoveryReplicaOffset};
}

class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double v);

  constexpr double value() const { return value_; }

  // Labels u (as 64-bit integers) are open iff u < threshold(); p = 1 opens everything.
  std::uint64_t threshold() const;
  bool is_one() const { return value_ >= 1.0; }

 private:
  double value_ = 0.0;
};

// SplitMix64 output function.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// splitmix64(splitmix64(splitmix64(seed) ^ replica) ^ edge_id)
constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t replica, std::uint64_t edge_id) {
  return splitmix64(splitmix64(splitmix64(seed) ^ replica) ^ edge_id);
}

constexpr std::uint64_t zigzag(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

// Bits 0..3: axis. Coordinate i occupies coordinate_bits(d) bits starting at
// 4 + i * coordinate_bits(d), zig-zag encoded.
std::uint64_t canonical_edge_id(const Edge& edge);
std::uint64_t canonical_edge_id(std::span<const std::int64_t> base, int axis);

// Partial id without the axis field; OR the axis in to get the full id.
std::uint64_t packed_site_bits(std::span<const std::int64_t> coords);

std::uint64_t edge_label(SeedKey key, std::uint64_t edge_id);
// label * 2^-64 rounded down to 53 bits; always in [0, 1).
double edge_value(SeedKey key, const Edge& edge);

}  // namespace sdp
