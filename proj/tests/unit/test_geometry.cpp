#include <doctest.h>

#include <set>

#include "sdp/errors.hpp"
#include "sdp/geometry.hpp"

using namespace sdp;

TEST_SUITE("geometry") {

TEST_CASE("region_sites enumerates boxes lexicographically") {
  const auto sites = region_sites(Region::box(Site::origin(2), 1));
  REQUIRE(sites.size() == 9);
  CHECK(sites.front() == Site{-1, -1});
  CHECK(sites.back() == Site{1, 1});
  CHECK(std::is_sorted(sites.begin(), sites.end()));
}

TEST_CASE("slab box site counts") {
  CHECK(Region::slab_box(Site::origin(3), 1, 1).site_count() == 27);
  CHECK(slab_box(Site::origin(4), 1, 1).site_count() == 441);
  CHECK(slab_box(Site{5, 0, 0}, 2, 2).site_count() == 845);
  // Height-1 slab.
  CHECK(slab_box(Site::origin(3), 0, 1).site_count() == 49);
  CHECK(slab_box(Site::origin(3), 0, 1).side(2) == 1);
}

TEST_CASE("d=7 box size without enumeration") {
  const auto r = Region::box(Site::origin(7), 4);
  CHECK(r.site_count() == 4782969);
}

TEST_CASE("boundary sites") {
  CHECK(boundary_sites(Region::box(Site::origin(2), 1)).size() == 8);
  CHECK(boundary_sites(Region::box(Site::origin(2), 2)).size() == 16);
  CHECK(boundary_sites(Region::box(Site::origin(3), 1)).size() == 26);
  const auto zero = boundary_sites(Region::box(Site{4, 5}, 0));
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == Site{4, 5});
  CHECK_THROWS_AS(boundary_sites(Region::from_bounds({0, 0}, {2, 2})), ConfigError);
}

TEST_CASE("region edges") {
  CHECK(region_edges(Region::box(Site::origin(2), 1)).size() == 12);
  CHECK(region_edges(Region::box(Site::origin(3), 1)).size() == 54);
  const auto pair = Region::from_bounds({0, 0}, {1, 0});
  const auto e = region_edges(pair);
  REQUIRE(e.size() == 1);
  CHECK(e[0] == Edge{Site{0, 0}, 0});
  CHECK(pair.edge_count() == 1);
}

TEST_CASE("box counts match closed forms") {
  for (int d = 2; d <= 4; ++d) {
    for (std::int64_t L = 0; L <= 3; ++L) {
      const auto r = Region::box(Site::origin(d), L);
      std::uint64_t all = 1, inner = 1;
      for (int i = 0; i < d; ++i) {
        all *= static_cast<std::uint64_t>(2 * L + 1);
        inner *= static_cast<std::uint64_t>(std::max<std::int64_t>(2 * L - 1, 0));
      }
      CHECK(region_sites(r).size() == all);
      if (L >= 1) CHECK(boundary_sites(r).size() == all - inner);
      CHECK(r.edge_count() == region_edges(r).size());
    }
  }
}

TEST_CASE("region edges are unique") {
  const auto r = Region::slab_box(Site{1, -1, 0, 0}, 1, 2);
  const auto edges = region_edges(r);
  std::set<Edge> seen(edges.begin(), edges.end());
  CHECK(seen.size() == edges.size());
  for (const auto& e : edges) {
    CHECK(r.contains(e.base));
    CHECK(r.contains(e.tip()));
  }
}

TEST_CASE("membership agrees with enumeration") {
  for (int d = 2; d <= 3; ++d) {
    for (std::int64_t L = 0; L <= 3; ++L) {
      const auto r = Region::box(Site{std::vector<std::int64_t>(static_cast<std::size_t>(d), 1)}, L);
      const auto members = region_sites(r);
      std::set<Site> inside(members.begin(), members.end());
      const auto outer = Region::box(Site::origin(d), 5);
      for (const auto& s : region_sites(outer)) {
        CHECK(r.contains(s) == (inside.count(s) == 1));
      }
    }
  }
}

TEST_CASE("index round trip") {
  const auto r = Region::from_bounds({-2, 0, 3}, {1, 2, 4});
  for (std::uint64_t i = 0; i < r.site_count(); ++i) CHECK(r.index_of(r.site_at(i)) == i);
}

TEST_CASE("sites at distance") {
  const auto r = Region::box(Site::origin(2), 3);
  CHECK(sites_at_distance(r, Site::origin(2), 0).size() == 1);
  CHECK(sites_at_distance(r, Site::origin(2), 1).size() == 8);
  CHECK(sites_at_distance(r, Site::origin(2), 3).size() == 24);
  CHECK(sites_at_distance(r, Site{3, 3}, 6).size() == 13);
}

TEST_CASE("slab box preconditions") {
  CHECK_THROWS_AS(slab_box(Site{0, 0, 1}, 1, 1), ConfigError);
  CHECK_THROWS_AS(slab_box(Site::origin(2), 1, 0), ConfigError);
  CHECK(on_plane(Site{7, -3, 0, 0}));
  CHECK_FALSE(on_plane(Site{7, -3, 0, 2}));
}

TEST_CASE("arm support") {
  const auto r = arm_support(Site::origin(3), 1, 2);
  CHECK(r.lo(0) == -8);
  CHECK(r.hi(1) == 8);
  CHECK(r.lo(2) == -3);
  CHECK(r.hi(2) == 3);
}

TEST_CASE("dimension and extent checks") {
  CHECK_THROWS_AS(check_dimension(1), DimensionError);
  CHECK_THROWS_AS(check_dimension(16), DimensionError);
  CHECK_NOTHROW(check_dimension(15));
  CHECK_THROWS_AS(Region::box(Site::origin(2), max_coordinate(2) + 1), ExtentError);
  CHECK_THROWS_AS(Region::box(Site::origin(2), -1), ConfigError);
  CHECK_THROWS_AS(linf_distance(Site{0, 0}, Site{0, 0, 0}), DimensionError);
  const auto r = Region::box(Site::origin(2), 1);
  CHECK_THROWS_AS(r.contains(Site{0, 0, 0}), DimensionError);
}

}
