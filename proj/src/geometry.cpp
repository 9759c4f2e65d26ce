#include "sdp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "sdp/errors.hpp"

namespace sdp {

void check_dimension(int dim) {
  if (dim < kMinDimension || dim > kMaxDimension) {
    throw DimensionError("dimension " + std::to_string(dim) + " outside [" + std::to_string(kMinDimension) +
                         ", " + std::to_string(kMaxDimension) + "]");
  }
}

std::string Site::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) os << ',';
    os << coords[i];
  }
  os << ')';
  return os.str();
}

std::int64_t linf_distance(const Site& a, const Site& b) {
  if (a.dim() != b.dim()) throw DimensionError("linf_distance: dimension mismatch");
  std::int64_t best = 0;
  for (int i = 0; i < a.dim(); ++i) best = std::max(best, a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
  return best;
}

Site Edge::tip() const {
  Site t = base;
  t[axis] += 1;
  return t;
}

Region Region::box(const Site& center, std::int64_t radius) {
  check_dimension(center.dim());
  if (radius < 0) throw ConfigError("box radius must be non-negative");
  Region r;
  r.kind_ = RegionKind::box;
  r.center_ = center;
  r.radius_ = radius;
  for (int i = 0; i < center.dim(); ++i) {
    r.lo_.push_back(center[i] - radius);
    r.hi_.push_back(center[i] + radius);
  }
  r.finalize();
  return r;
}

Region Region::slab_box(const Site& center, std::int64_t slab_height, std::int64_t box_radius) {
  check_dimension(center.dim());
  if (slab_height < 0 || box_radius < 0) throw ConfigError("slab height and box radius must be non-negative");
  for (int i = 2; i < center.dim(); ++i) {
    if (center[i] != 0) throw ConfigError("slab box center " + center.to_string() + " is not on the Z^2 plane");
  }
  Region r;
  r.kind_ = RegionKind::slab_box;
  r.center_ = center;
  r.radius_ = box_radius;
  r.slab_height_ = slab_height;
  for (int i = 0; i < center.dim(); ++i) {
    const std::int64_t half = i < 2 ? box_radius : slab_height;
    r.lo_.push_back(center[i] - half);
    r.hi_.push_back(center[i] + half);
  }
  r.finalize();
  return r;
}

Region Region::from_bounds(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi) {
  if (lo.size() != hi.size()) throw DimensionError("region bounds have different lengths");
  check_dimension(static_cast<int>(lo.size()));
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw ConfigError("region bound lo > hi on axis " + std::to_string(i));
  }
  Region r;
  r.kind_ = RegionKind::generic;
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  r.center_ = Site(std::vector<std::int64_t>(r.lo_.size(), 0));
  r.finalize();
  return r;
}

void Region::finalize() {
  const int d = dim();
  for (int i = 0; i < d; ++i) {
    if (lo(i) < min_coordinate(d) || hi(i) > max_coordinate(d)) {
      throw ExtentError("region " + describe() + " exceeds the lattice extent [" + std::to_string(min_coordinate(d)) +
                        ", " + std::to_string(max_coordinate(d)) + "] for d=" + std::to_string(d));
    }
  }
  strides_.assign(static_cast<std::size_t>(d), 1);
  std::uint64_t count = 1;
  for (int i = d - 1; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] = count;
    const auto s = static_cast<std::uint64_t>(side(i));
    if (count > std::numeric_limits<std::uint64_t>::max() / s) throw ExtentError("region site count overflows 64 bits");
    count *= s;
  }
  site_count_ = count;
}

std::uint64_t Region::edge_count() const {
  std::uint64_t total = 0;
  for (int axis = 0; axis < dim(); ++axis) {
    total += site_count_ / static_cast<std::uint64_t>(side(axis)) * static_cast<std::uint64_t>(side(axis) - 1);
  }
  return total;
}

bool Region::contains_coords(std::span<const std::int64_t> c) const {
  if (static_cast<int>(c.size()) != dim()) throw DimensionError("site dimension does not match region");
  for (int i = 0; i < dim(); ++i) {
    if (c[static_cast<std::size_t>(i)] < lo(i) || c[static_cast<std::size_t>(i)] > hi(i)) return false;
  }
  return true;
}

bool Region::contains(const Site& s) const { return contains_coords(s.coords); }

bool Region::contains(const Region& other) const {
  if (other.dim() != dim()) throw DimensionError("region dimension mismatch");
  for (int i = 0; i < dim(); ++i) {
    if (other.lo(i) < lo(i) || other.hi(i) > hi(i)) return false;
  }
  return true;
}

std::uint64_t Region::index_of_coords(std::span<const std::int64_t> c) const {
  std::uint64_t idx = 0;
  for (int i = 0; i < dim(); ++i) {
    idx += static_cast<std::uint64_t>(c[static_cast<std::size_t>(i)] - lo(i)) * strides_[static_cast<std::size_t>(i)];
  }
  return idx;
}

std::uint64_t Region::index_of(const Site& s) const { return index_of_coords(s.coords); }

void Region::coords_at(std::uint64_t index, std::span<std::int64_t> out) const {
  for (int i = 0; i < dim(); ++i) {
    const auto st = strides_[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = lo(i) + static_cast<std::int64_t>(index / st);
    index %= st;
  }
}

Site Region::site_at(std::uint64_t index) const {
  Site s(std::vector<std::int64_t>(static_cast<std::size_t>(dim())));
  coords_at(index, s.coords);
  return s;
}

bool Region::has_forward_neighbor(std::uint64_t index, int axis) const {
  const auto st = strides_[static_cast<std::size_t>(axis)];
  const auto offset = (index / st) % static_cast<std::uint64_t>(side(axis));
  return offset + 1 < static_cast<std::uint64_t>(side(axis));
}

std::string Region::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case RegionKind::box: os << "B_" << center_.to_string() << "(" << radius_ << ")"; break;
    case RegionKind::slab_box:
      os << "S_" << slab_height_ << " ∩ B_" << center_.to_string() << "(" << radius_ << ")";
      break;
    case RegionKind::generic: {
      os << '[';
      for (int i = 0; i < dim(); ++i) {
        if (i) os << " x ";
        os << lo(i) << ".." << hi(i);
      }
      os << ']';
      break;
    }
  }
  return os.str();
}

void for_each_site(const Region& region, const std::function<void(const Site&)>& fn) {
  const int d = region.dim();
  Site s(std::vector<std::int64_t>(region.lo_bounds().begin(), region.lo_bounds().end()));
  for (std::uint64_t n = 0; n < region.site_count(); ++n) {
    fn(s);
    for (int i = d - 1; i >= 0; --i) {
      if (++s[i] <= region.hi(i)) break;
      s[i] = region.lo(i);
    }
  }
}

std::vector<Site> region_sites(const Region& region) {
  std::vector<Site> out;
  out.reserve(region.site_count());
  for_each_site(region, [&](const Site& s) { out.push_back(s); });
  return out;
}

std::vector<std::uint64_t> sites_at_distance(const Region& region, const Site& center, std::int64_t r) {
  if (center.dim() != region.dim()) throw DimensionError("sites_at_distance: dimension mismatch");
  std::vector<std::uint64_t> out;
  std::uint64_t idx = 0;
  for_each_site(region, [&](const Site& s) {
    if (linf_distance(s, center) == r) out.push_back(idx);
    ++idx;
  });
  return out;
}

std::vector<Site> boundary_sites(const Region& box) {
  if (box.kind() != RegionKind::box) throw ConfigError("boundary_sites expects a box region");
  std::vector<Site> out;
  for_each_site(box, [&](const Site& s) {
    if (linf_distance(s, box.center()) == box.radius()) out.push_back(s);
  });
  return out;
}

std::vector<Edge> region_edges(const Region& region) {
  std::vector<Edge> out;
  out.reserve(region.edge_count());
  std::uint64_t idx = 0;
  for_each_site(region, [&](const Site& s) {
    for (int axis = 0; axis < region.dim(); ++axis) {
      if (region.has_forward_neighbor(idx, axis)) out.push_back(Edge{s, axis});
    }
    ++idx;
  });
  return out;
}

bool on_plane(const Site& x) {
  for (int i = 2; i < x.dim(); ++i) {
    if (x[i] != 0) return false;
  }
  return true;
}

Region slab_box(const Site& x, std::int64_t ell, std::int64_t L) {
  if (!on_plane(x)) throw ConfigError("slab_box: " + x.to_string() + " is not in the Z^2 sublattice");
  if (L < 1) throw ConfigError("slab_box: L must be >= 1");
  if (ell < 0) throw ConfigError("slab_box: slab height must be >= 0");
  return Region::slab_box(x, ell, 3 * L);
}

Region arm_support(const Site& x, std::int64_t ell, std::int64_t L) {
  if (!on_plane(x)) throw ConfigError("arm_support: " + x.to_string() + " is not in the Z^2 sublattice");
  std::vector<std::int64_t> lo, hi;
  for (int i = 0; i < x.dim(); ++i) {
    const std::int64_t half = i < 2 ? 4 * L : ell + L;
    lo.push_back(x[i] - half);
    hi.push_back(x[i] + half);
  }
  return Region::from_bounds(std::move(lo), std::move(hi));
}

}  // namespace sdp
