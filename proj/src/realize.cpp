#include "sdp/realize.hpp"

#include <algorithm>
#include <vector>

namespace sdp {
namespace {

// Sites per parallel block; a multiple of 64 so blocks never share a word.
constexpr std::uint64_t kBlockSites = 64 * 64;

void fill_range(SeedKey key, const Region& region, std::uint64_t threshold, bool all_open, std::uint64_t begin,
                std::uint64_t end, Configuration& out) {
  const int d = region.dim();
  std::vector<std::int64_t> c(static_cast<std::size_t>(d));
  region.coords_at(begin, c);
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const std::uint64_t packed = packed_site_bits(c);
    for (int axis = 0; axis < d; ++axis) {
      if (c[static_cast<std::size_t>(axis)] == region.hi(axis)) continue;
      const bool open = all_open || edge_label(key, packed | static_cast<std::uint64_t>(axis)) < threshold;
      if (open) out.set(idx, axis, true);
    }
    for (int i = d - 1; i >= 0; --i) {
      auto& ci = c[static_cast<std::size_t>(i)];
      if (++ci <= region.hi(i)) break;
      ci = region.lo(i);
    }
  }
}

}  // namespace

Configuration realize(SeedKey key, const Region& region, Probability p, Layer layer) {
  Configuration out(region, layer);
  out.set_provenance(key, p.value(), layer);
  if (p.value() > 0.0) {
    const auto threshold = p.threshold();
    const bool all_open = p.is_one();
    const std::uint64_t n = region.site_count();
    const auto blocks = static_cast<std::int64_t>((n + kBlockSites - 1) / kBlockSites);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const auto begin = static_cast<std::uint64_t>(b) * kBlockSites;
      fill_range(key, region, threshold, all_open, begin, std::min(n, begin + kBlockSites), out);
    }
  }
  return out;
}

Configuration realize_serial(SeedKey key, const Region& region, Probability p, Layer layer) {
  Configuration out(region, layer);
  out.set_provenance(key, p.value(), layer);
  const auto threshold = p.threshold();
  const int d = region.dim();
  std::uint64_t idx = 0;
  for_each_site(region, [&](const Site& s) {
    for (int axis = 0; axis < d; ++axis) {
      if (!region.has_forward_neighbor(idx, axis)) continue;
      const auto label = edge_label(key, canonical_edge_id(s.coords, axis));
      if (p.is_one() || label < threshold) out.set(idx, axis, true);
    }
    ++idx;
  });
  return out;
}

Configuration realize_recovery_noise(SeedKey key, const Region& region, Probability eps) {
  return realize(recovery_key(key), region, eps, Layer::omega_prime_eps);
}

}  // namespace sdp
