#pragma once

// Finite subsets of Z^d: boxes B_x(L), slab boxes S_l ∩ B_x(R), and the
// lexicographic site/edge enumeration every other module iterates in.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sdp {

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 15;

// Bits available per coordinate in a canonical edge id (4 bits hold the axis).
constexpr int coordinate_bits(int dim) { return 60 / dim; }

// Coordinates of every site must lie in [-max_coordinate(d) - 1, max_coordinate(d)].
constexpr std::int64_t max_coordinate(int dim) {
  return (std::int64_t{1} << (coordinate_bits(dim) - 1)) - 1;
}
constexpr std::int64_t min_coordinate(int dim) { return -max_coordinate(dim) - 1; }

void check_dimension(int dim);

struct Site {
  std::vector<std::int64_t> coords;

  Site() = default;
  explicit Site(std::vector<std::int64_t> c) : coords(std::move(c)) {}
  Site(std::initializer_list<std::int64_t> c) : coords(c) {}

  static Site origin(int dim) { return Site(std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0)); }

  int dim() const { return static_cast<int>(coords.size()); }
  std::int64_t operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }

  auto operator<=>(const Site&) const = default;
  bool operator==(const Site&) const = default;

  std::string to_string() const;
};

std::int64_t linf_distance(const Site& a, const Site& b);

// Nearest-neighbour edge {base, base + unit(axis)}; this is its only representation.
struct Edge {
  Site base;
  int axis = 0;

  Site tip() const;
  auto operator<=>(const Edge&) const = default;
  bool operator==(const Edge&) const = default;
};

enum class RegionKind : std::uint8_t { box = 0, slab_box = 1, generic = 2 };

// Axis-aligned product of integer intervals. Sites are indexed in lexicographic
// coordinate order (axis 0 most significant), which fixes all iteration order.
class Region {
 public:
  Region() = default;

  // B_center(radius).
  static Region box(const Site& center, std::int64_t radius);
  // |y_i - center_i| <= box_radius for i in {0,1}, |y_i| <= slab_height for i >= 2.
  static Region slab_box(const Site& center, std::int64_t slab_height, std::int64_t box_radius);
  static Region from_bounds(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi);

  int dim() const { return static_cast<int>(lo_.size()); }
  RegionKind kind() const { return kind_; }
  const Site& center() const { return center_; }
  std::int64_t radius() const { return radius_; }
  std::int64_t slab_height() const { return slab_height_; }

  std::int64_t lo(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }
  std::int64_t hi(int axis) const { return hi_[static_cast<std::size_t>(axis)]; }
  std::int64_t side(int axis) const { return hi(axis) - lo(axis) + 1; }
  std::span<const std::int64_t> lo_bounds() const { return lo_; }
  std::span<const std::int64_t> hi_bounds() const { return hi_; }
  std::uint64_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  std::uint64_t site_count() const { return site_count_; }
  // Number of nearest-neighbour edges with both endpoints inside.
  std::uint64_t edge_count() const;

  bool contains(const Site& s) const;
  bool contains_coords(std::span<const std::int64_t> c) const;
  bool contains(const Region& other) const;

  // Precondition: contains(s).
  std::uint64_t index_of(const Site& s) const;
  std::uint64_t index_of_coords(std::span<const std::int64_t> c) const;
  Site site_at(std::uint64_t index) const;
  void coords_at(std::uint64_t index, std::span<std::int64_t> out) const;

  bool has_forward_neighbor(std::uint64_t index, int axis) const;

  bool operator==(const Region& other) const { return lo_ == other.lo_ && hi_ == other.hi_; }

  std::string describe() const;

 private:
  void finalize();

  RegionKind kind_ = RegionKind::generic;
  Site center_;
  std::int64_t radius_ = 0;
  std::int64_t slab_height_ = 0;
  std::vector<std::int64_t> lo_;
  std::vector<std::int64_t> hi_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t site_count_ = 0;
};

// Every member site exactly once, lexicographic order.
std::vector<Site> region_sites(const Region& region);
void for_each_site(const Region& region, const std::function<void(const Site&)>& fn);

// Sites with ||y - center||_inf == radius. Radius 0 gives the center alone.
std::vector<Site> boundary_sites(const Region& box);

// Sites of `region` at exact l-inf distance r from `center`.
std::vector<std::uint64_t> sites_at_distance(const Region& region, const Site& center, std::int64_t r);

// Edges with both endpoints in the region, ordered by (base index, axis).
std::vector<Edge> region_edges(const Region& region);

// S_l ∩ B_x(3L). x must lie in the Z^2 sublattice.
Region slab_box(const Site& x, std::int64_t ell, std::int64_t L);

// Smallest region holding every B_y(L) for y in S_l ∩ B_x(3L):
// x ± 4L on the first two axes, ±(l + L) on the others.
Region arm_support(const Site& x, std::int64_t ell, std::int64_t L);

bool on_plane(const Site& x);

}  // namespace sdp
