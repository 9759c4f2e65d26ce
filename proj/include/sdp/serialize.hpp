#pragma once

// Bit-packed binary formats, little-endian throughout.
//
// Configuration record:
//   "SDPC"            4 bytes magic
//   version           u8  (= 1)
//   layer             u8  (Layer)
//   dimension         u8
//   region kind       u8  (RegionKind)
//   lo[d], hi[d]      i64 each
//   flags             u8  (bit 0: seed key present)
//   experiment_seed   u64
//   replica_index     u64
//   probability       f64 (NaN when not applicable)
//   edge_count        u64
//   bits              ceil(edge_count / 8) bytes; edge k of the canonical
//                     region_edges order is bit (k % 8) of byte k / 8
//
// Triple: "SDPT", version u8, layer count u8 (= 4), then four configuration
// records in the order omega_p, omega_tilde_p, omega_prime_eps, omega_tilde_p_eps.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdp/configuration.hpp"
#include "sdp/process.hpp"

namespace sdp {

std::vector<std::uint8_t> serialize(const Configuration& config);
Configuration deserialize_configuration(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> serialize(const SdpTriple& triple);
SdpTriple deserialize_triple(const std::vector<std::uint8_t>& bytes);

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_file(const std::string& path);

}  // namespace sdp
