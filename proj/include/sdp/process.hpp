#pragma once

// Self-destructive percolation objects in a finite box: the destroyed
// configuration, the recovered configuration, and omega_q minus the infinite
// cluster of omega_p, all relative to a finite-volume stand-in for C_inf.

#include <cstdint>
#include <optional>
#include <string>

#include "sdp/clustering.hpp"
#include "sdp/configuration.hpp"

namespace sdp {

struct ProxyRule {
  enum class Kind : std::uint8_t { touches_region_boundary, radius_at_least };

  Kind kind = Kind::touches_region_boundary;
  std::int64_t radius = 0;  // used by radius_at_least (half-diameter convention)

  static ProxyRule boundary() { return {}; }
  static ProxyRule radius_at_least(std::int64_t r) { return {Kind::radius_at_least, r}; }

  // "boundary" or "radius:R".
  static ProxyRule parse(const std::string& text);
  std::string to_string() const;

  bool operator==(const ProxyRule&) const = default;
};

struct InfiniteClusterProxy {
  ProxyRule rule;
  SiteMask sites;               // union of whole clusters of the source labeling
  std::optional<SeedKey> key;   // key of the configuration the proxy came from

  const Region& region() const { return sites.region(); }
  std::uint64_t size() const { return sites.count(); }
};

InfiniteClusterProxy infinite_cluster_proxy(const ClusterLabeling& labeling, ProxyRule rule,
                                            std::optional<SeedKey> key = std::nullopt);
// Labels `config` and records its key.
InfiniteClusterProxy infinite_cluster_proxy(const Configuration& config, ProxyRule rule);

// omega_tilde_p: open iff open in omega_p and no endpoint in the proxy.
Configuration destroy(const Configuration& omega_p, const InfiniteClusterProxy& proxy);

struct Recovery {
  Configuration omega_prime_eps;
  Configuration omega_tilde_p_eps;
};

// omega_tilde_{p,eps} = max(omega_tilde_p, omega'_eps), noise drawn from recovery_key(key).
Recovery recover(const Configuration& omega_tilde_p, SeedKey key, Probability eps);

// omega_q \ proxy. omega_q and the proxy's source must share a seed key.
Configuration subtract_infinite_cluster(const Configuration& omega_q, const InfiniteClusterProxy& proxy);

struct SdpTriple {
  Configuration omega_p;
  Configuration omega_tilde_p;
  Configuration omega_prime_eps;
  Configuration omega_tilde_p_eps;
};

SdpTriple build_triple(SeedKey key, const Region& region, Probability p, Probability eps, ProxyRule rule);

}  // namespace sdp
