#include "sdp/process.hpp"

#include "sdp/errors.hpp"
#include "sdp/realize.hpp"

namespace sdp {

ProxyRule ProxyRule::parse(const std::string& text) {
  if (text == "boundary" || text == "touches_region_boundary") return boundary();
  const std::string prefix = "radius:";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t pos = 0;
    long long r = 0;
    try {
      r = std::stoll(text.substr(prefix.size()), &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad proxy rule '" + text + "'");
    }
    if (pos != text.size() - prefix.size() || r < 0) throw ConfigError("bad proxy rule '" + text + "'");
    return radius_at_least(r);
  }
  throw ConfigError("unknown proxy rule '" + text + "' (expected boundary or radius:R)");
}

std::string ProxyRule::to_string() const {
  return kind == Kind::touches_region_boundary ? "boundary" : "radius:" + std::to_string(radius);
}

InfiniteClusterProxy infinite_cluster_proxy(const ClusterLabeling& labeling, ProxyRule rule,
                                            std::optional<SeedKey> key) {
  const Region& region = labeling.region();
  InfiniteClusterProxy proxy{rule, SiteMask(region), key};
  std::vector<std::uint8_t> selected(labeling.cluster_count(), 0);

  if (rule.kind == ProxyRule::Kind::touches_region_boundary) {
    // Inner boundary of the simulation region: any coordinate on a face.
    std::vector<std::int64_t> c(static_cast<std::size_t>(region.dim()));
    for (std::uint64_t i = 0; i < region.site_count(); ++i) {
      region.coords_at(i, c);
      for (int a = 0; a < region.dim(); ++a) {
        if (c[static_cast<std::size_t>(a)] == region.lo(a) || c[static_cast<std::size_t>(a)] == region.hi(a)) {
          selected[labeling.cluster_of(i)] = 1;
          break;
        }
      }
    }
  } else {
    std::int64_t max_extent = 0;
    for (int a = 0; a < region.dim(); ++a) max_extent = std::max(max_extent, region.side(a) - 1);
    if (rule.radius > cluster_radius(max_extent, RadiusConvention::half_diameter)) {
      diag::warn("proxy radius " + std::to_string(rule.radius) + " exceeds what " + region.describe() +
                 " can hold; proxy is empty");
      return proxy;
    }
    for (std::uint32_t c = 0; c < labeling.cluster_count(); ++c) {
      if (labeling.stats(c).radius() >= rule.radius) selected[c] = 1;
    }
  }
  for (std::uint64_t i = 0; i < region.site_count(); ++i) {
    if (selected[labeling.cluster_of(i)]) proxy.sites.set(i);
  }
  return proxy;
}

InfiniteClusterProxy infinite_cluster_proxy(const Configuration& config, ProxyRule rule) {
  return infinite_cluster_proxy(label_clusters(config), rule, config.key());
}

Configuration destroy(const Configuration& omega_p, const InfiniteClusterProxy& proxy) {
  if (!(omega_p.region() == proxy.region())) throw ConfigError("destroy: proxy and configuration regions differ");
  auto out = close_sites(omega_p, proxy.sites);
  out.set_provenance(omega_p.key(), omega_p.probability(), Layer::omega_tilde_p);
  return out;
}

Recovery recover(const Configuration& omega_tilde_p, SeedKey key, Probability eps) {
  auto noise = realize_recovery_noise(key, omega_tilde_p.region(), eps);
  auto merged = edge_union(omega_tilde_p, noise);
  merged.set_provenance(key, omega_tilde_p.probability(), Layer::omega_tilde_p_eps);
  return Recovery{std::move(noise), std::move(merged)};
}

Configuration subtract_infinite_cluster(const Configuration& omega_q, const InfiniteClusterProxy& proxy) {
  if (!(omega_q.region() == proxy.region())) {
    throw ConfigError("subtract_infinite_cluster: proxy and configuration regions differ");
  }
  if (!omega_q.key() || !proxy.key || !(*omega_q.key() == *proxy.key)) {
    throw CouplingError("subtract_infinite_cluster: omega_q and the proxy source were not realized from the same key");
  }
  auto out = close_sites(omega_q, proxy.sites);
  out.set_provenance(omega_q.key(), omega_q.probability(), Layer::derived);
  return out;
}

SdpTriple build_triple(SeedKey key, const Region& region, Probability p, Probability eps, ProxyRule rule) {
  auto omega_p = realize(key, region, p, Layer::omega_p);
  const auto proxy = infinite_cluster_proxy(omega_p, rule);
  auto tilde = destroy(omega_p, proxy);
  auto rec = recover(tilde, key, eps);
  return SdpTriple{std::move(omega_p), std::move(tilde), std::move(rec.omega_prime_eps),
                   std::move(rec.omega_tilde_p_eps)};
}

}  // namespace sdp
