#include "sdp/configuration.hpp"

#include <bit>

#include "sdp/errors.hpp"

namespace sdp {

const char* layer_name(Layer layer) {
  switch (layer) {
    case Layer::omega_p: return "omega_p";
    case Layer::omega_tilde_p: return "omega_tilde_p";
    case Layer::omega_prime_eps: return "omega_prime_eps";
    case Layer::omega_tilde_p_eps: return "omega_tilde_p_eps";
    case Layer::derived: return "derived";
  }
  return "unknown";
}

void SiteMask::insert(const Site& s) {
  if (!region_.contains(s)) throw ExtentError("site " + s.to_string() + " outside " + region_.describe());
  set(region_.index_of(s));
}

std::uint64_t SiteMask::count() const {
  std::uint64_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

std::vector<std::uint64_t> SiteMask::indices() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

Configuration::Configuration(Region region, Layer layer) : region_(std::move(region)), layer_(layer) {
  const auto slots = region_.site_count() * static_cast<std::uint64_t>(region_.dim());
  words_.assign((slots + 63) / 64, 0);
}

bool Configuration::is_open(const Edge& edge) const {
  if (!region_.contains(edge.base) || !region_.contains(edge.tip())) {
    throw ExtentError("edge outside configuration region " + region_.describe());
  }
  return is_open(region_.index_of(edge.base), edge.axis);
}

void Configuration::set(std::uint64_t site, int axis, bool open) {
  const auto slot = site * static_cast<std::uint64_t>(dim()) + static_cast<std::uint64_t>(axis);
  const auto mask = std::uint64_t{1} << (slot & 63);
  if (open) {
    words_[slot >> 6] |= mask;
  } else {
    words_[slot >> 6] &= ~mask;
  }
}

void Configuration::set(const Edge& edge, bool open) {
  if (!region_.contains(edge.base) || !region_.contains(edge.tip())) {
    throw ExtentError("edge outside configuration region " + region_.describe());
  }
  set(region_.index_of(edge.base), edge.axis, open);
}

std::uint64_t Configuration::open_count() const {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

bool Configuration::subset_of(const Configuration& other) const {
  if (!(region_ == other.region_)) throw ConfigError("subset_of: region mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

Configuration Configuration::restrict_to(const Region& sub) const {
  if (!region_.contains(sub)) throw ExtentError("restrict_to: " + sub.describe() + " not inside " + region_.describe());
  Configuration out(sub, layer_);
  out.key_ = key_;
  out.probability_ = probability_;
  const int d = dim();
  std::vector<std::int64_t> c(static_cast<std::size_t>(d));
  for (std::uint64_t i = 0; i < sub.site_count(); ++i) {
    sub.coords_at(i, c);
    const auto src = region_.index_of_coords(c);
    for (int axis = 0; axis < d; ++axis) {
      if (sub.has_forward_neighbor(i, axis) && is_open(src, axis)) out.set(i, axis, true);
    }
  }
  return out;
}

Configuration edge_union(const Configuration& a, const Configuration& b) {
  if (!(a.region() == b.region())) throw ConfigError("edge_union: region mismatch");
  Configuration out = a;
  auto w = out.mutable_words();
  auto bw = b.words();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] |= bw[i];
  out.set_provenance(std::nullopt, std::numeric_limits<double>::quiet_NaN(), Layer::derived);
  return out;
}

Configuration close_sites(const Configuration& config, const SiteMask& closed) {
  const Region& r = config.region();
  if (!(closed.region() == r)) throw ConfigError("close_sites: mask region does not match configuration");
  Configuration out = config;
  out.set_layer(Layer::derived);
  const int d = r.dim();
  for (std::uint64_t i = 0; i < r.site_count(); ++i) {
    for (int axis = 0; axis < d; ++axis) {
      if (!r.has_forward_neighbor(i, axis)) continue;
      if (closed.test(i) || closed.test(i + r.stride(axis))) out.set(i, axis, false);
    }
  }
  return out;
}

}  // namespace sdp
