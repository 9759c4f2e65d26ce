#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

#include "sdp/edge_field.hpp"
#include "sdp/errors.hpp"
#include "sdp/realize.hpp"
#include "sdp/serialize.hpp"

using namespace sdp;

TEST_SUITE("edge-field") {

TEST_CASE("splitmix64 reference value") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(1, 2, 3) == splitmix64(splitmix64(splitmix64(1) ^ 2) ^ 3));
}

TEST_CASE("canonical edge id layout") {
  CHECK(canonical_edge_id(Edge{Site{0, 0}, 0}) == 0);
  CHECK(canonical_edge_id(Edge{Site{0, 0}, 1}) == 1);
  // zigzag(1) = 2 at bit 4, zigzag(-1) = 1 at bit 4 + 30.
  CHECK(canonical_edge_id(Edge{Site{1, -1}, 0}) == 32 + (std::uint64_t{1} << 34));
  CHECK(canonical_edge_id(Edge{Site{2, 5}, 1}) == canonical_edge_id(Edge{Site{2, 5}, 1}));
  CHECK(canonical_edge_id(Edge{Site{2, 5}, 0}) != canonical_edge_id(Edge{Site{2, 5}, 1}));
  CHECK(coordinate_bits(7) == 8);
}

TEST_CASE("canonical edge id rejects coordinates outside the extent") {
  const auto m = max_coordinate(3);
  CHECK_NOTHROW(canonical_edge_id(Edge{Site{m - 1, 0, 0}, 0}));
  CHECK_THROWS_AS(canonical_edge_id(Edge{Site{m, 0, 0}, 0}), ExtentError);
  CHECK_THROWS_AS(canonical_edge_id(Edge{Site{0, 0, 0}, 3}), ConfigError);
}

TEST_CASE("no id collisions over 1e6 random edges") {
  std::mt19937_64 rng(12345);
  const int d = 4;
  std::uniform_int_distribution<std::int64_t> coord(min_coordinate(d), max_coordinate(d) - 1);
  std::uniform_int_distribution<int> axis(0, d - 1);
  std::unordered_set<std::uint64_t> ids;
  std::set<Edge> edges;
  ids.reserve(2'000'000);
  for (int i = 0; i < 1'000'000; ++i) {
    Edge e{Site{coord(rng), coord(rng), coord(rng), coord(rng)}, axis(rng)};
    ids.insert(canonical_edge_id(e));
    edges.insert(std::move(e));
  }
  CHECK(ids.size() == edges.size());
}

TEST_CASE("edge values") {
  const SeedKey key{42, 7};
  const Edge e{Site{3, -4}, 1};
  CHECK(edge_value(key, e) == edge_value(key, e));
  double sum = 0.0;
  int equal = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const Edge f{Site{i % 1000 - 500, i / 1000 - 500}, i & 1};
    const double v = edge_value(key, f);
    CHECK_UNARY(v >= 0.0);
    CHECK_UNARY(v < 1.0);
    sum += v;
    if (i < 10000 && v == edge_value(SeedKey{42, 8}, f)) ++equal;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.002);
  CHECK(equal == 0);
}

TEST_CASE("probability thresholds") {
  CHECK(Probability(0.0).threshold() == 0);
  CHECK(Probability(0.5).threshold() == (std::uint64_t{1} << 63));
  CHECK(Probability(1.0).is_one());
  CHECK_THROWS_AS(Probability(1.5), ConfigError);
  CHECK_THROWS_AS(Probability(-0.1), ConfigError);
  CHECK_THROWS_AS(Probability(std::nan("")), ConfigError);
}

TEST_CASE("realize extremes") {
  const auto r = Region::box(Site::origin(3), 3);
  CHECK(realize(SeedKey{1, 1}, r, Probability(0.0)).open_count() == 0);
  CHECK(realize(SeedKey{1, 1}, r, Probability(1.0)).open_count() == r.edge_count());
}

TEST_CASE("realize matches its serial reference") {
  for (int d = 2; d <= 5; ++d) {
    const auto r = Region::box(Site::origin(d), d == 2 ? 40 : 4);
    for (double p : {0.0, 0.3, 0.77, 1.0}) {
      const auto a = realize(SeedKey{9, static_cast<std::uint64_t>(d)}, r, Probability(p));
      const auto b = realize_serial(SeedKey{9, static_cast<std::uint64_t>(d)}, r, Probability(p));
      CHECK(a.same_edges(b));
    }
  }
}

TEST_CASE("openness is the threshold rule") {
  const SeedKey key{5, 5};
  const auto r = Region::slab_box(Site{1, 1, 0}, 1, 3);
  const Probability p(0.42);
  const auto c = realize(key, r, p);
  for (const auto& e : region_edges(r)) CHECK(c.is_open(e) == (edge_label(key, canonical_edge_id(e)) < p.threshold()));
}

TEST_CASE("monotone coupling") {
  const auto r = Region::box(Site::origin(3), 3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Configuration prev = realize(SeedKey{s, 3}, r, Probability(0.0));
    for (int k = 1; k <= 10; ++k) {
      auto next = realize(SeedKey{s, 3}, r, Probability(0.1 * k));
      CHECK(prev.subset_of(next));
      prev = std::move(next);
    }
  }
}

TEST_CASE("marginal at a fixed edge within 3 sigma") {
  const Edge e{Site{2, -1}, 0};
  const auto id = canonical_edge_id(e);
  for (double p : {0.1, 0.5, 0.9}) {
    const Probability pr(p);
    const int R = 100000;
    int open = 0;
    for (int r = 0; r < R; ++r) open += edge_label(SeedKey{77, static_cast<std::uint64_t>(r)}, id) < pr.threshold();
    const double sigma = std::sqrt(p * (1 - p) / R);
    CHECK(std::abs(static_cast<double>(open) / R - p) <= 3 * sigma);
  }
}

TEST_CASE("recovery noise uses the offset key") {
  const SeedKey key{3, 10};
  CHECK(recovery_key(key).replica_index == 10 + kRecoveryReplicaOffset);
  const auto r = Region::box(Site::origin(2), 5);
  const auto noise = realize_recovery_noise(key, r, Probability(0.3));
  CHECK(noise.same_edges(realize(recovery_key(key), r, Probability(0.3))));
  CHECK(noise.layer() == Layer::omega_prime_eps);
  CHECK_FALSE(noise.same_edges(realize(key, r, Probability(0.3))));
}

TEST_CASE("serialization golden bytes") {
  const auto r = Region::from_bounds({0, 0}, {1, 1});
  const SeedKey key{1, 2};
  const auto c = realize(key, r, Probability(0.5));
  const auto bytes = serialize(c);
  // 4 + 4 + 2*2*8 + 1 + 8 + 8 + 8 + 8 + 1
  REQUIRE(bytes.size() == 74);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "SDPC");
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == static_cast<std::uint8_t>(Layer::omega_p));
  CHECK(bytes[6] == 2);
  CHECK(bytes[7] == static_cast<std::uint8_t>(RegionKind::generic));
  CHECK(bytes[40] == 1);  // key flag
  CHECK(bytes[41] == 1);  // seed, little-endian
  CHECK(bytes[49] == 2);  // replica
  CHECK(bytes[65] == 4);  // edge count
  std::uint8_t expect = 0;
  int k = 0;
  for (const auto& e : region_edges(r)) {
    if (edge_label(key, canonical_edge_id(e)) < Probability(0.5).threshold()) expect |= static_cast<std::uint8_t>(1 << k);
    ++k;
  }
  CHECK(bytes[73] == expect);
}

TEST_CASE("serialization round trip and determinism") {
  std::vector<Region> regions = {Region::box(Site{1, 2, 0}, 3), Region::slab_box(Site{0, 4, 0, 0}, 1, 2),
                                 Region::from_bounds({-1, 0}, {5, 2})};
  for (const auto& r : regions) {
    const auto c = realize(SeedKey{8, 1}, r, Probability(0.4));
    const auto bytes = serialize(c);
    CHECK(bytes == serialize(realize_serial(SeedKey{8, 1}, r, Probability(0.4))));
    const auto back = deserialize_configuration(bytes);
    CHECK(back.same_edges(c));
    CHECK(back.region().kind() == r.kind());
    CHECK(back.key() == c.key());
    CHECK(back.probability() == c.probability());
    CHECK(serialize(back) == bytes);
  }
}

TEST_CASE("deserialization rejects malformed input") {
  const auto c = realize(SeedKey{8, 1}, Region::box(Site::origin(2), 2), Probability(0.4));
  auto bytes = serialize(c);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(deserialize_configuration(truncated), ConfigError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize_configuration(bad_magic), ConfigError);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize_configuration(trailing), ConfigError);
}

}
