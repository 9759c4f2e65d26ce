#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iterator>

#include "sdp/errors.hpp"
#include "sdp/realize.hpp"
#include "sdp/reference.hpp"
#include "sdp/renorm.hpp"
#include "sdp/serialize.hpp"

using namespace sdp;

namespace {

// Row 0 of B_0(3) fully open, nothing else.
Configuration single_bar() {
  Configuration c(slab_box(Site::origin(2), 0, 1));
  for (std::int64_t i = -3; i < 3; ++i) c.set(Edge{Site{i, 0}, 0}, true);
  return c;
}

Configuration resample(const Configuration& background, const std::vector<Edge>& free_edges, SeedKey key,
                       Probability p) {
  Configuration c = background;
  for (const auto& e : free_edges) c.set(e, edge_label(key, canonical_edge_id(e)) < p.threshold());
  return c;
}

CoarseParams trivial_params() {
  CoarseParams cp;
  cp.dim = 2;
  cp.p = Probability(0.0);
  cp.q = Probability(1.0);
  cp.L = 1;
  cp.M = 1000;
  cp.half_width = 2;
  return cp;
}

}  // namespace

TEST_SUITE("renorm-events") {

TEST_CASE("event A extremes") {
  const Site x = Site::origin(2);
  const auto box_sites = static_cast<std::int64_t>(slab_box(x, 1, 2).site_count());
  const auto rep = event_A(SeedKey{1, 1}, x, 1, 2, box_sites + 1, Probability(0.5));
  CHECK(rep.outcome);
  const auto full = event_A(SeedKey{1, 1}, x, 1, 2, 1, Probability(1.0));
  CHECK_FALSE(full.outcome);
  CHECK(full.count == static_cast<std::uint64_t>(box_sites));
  CHECK(full.count >= static_cast<std::uint64_t>(full.M));
  CHECK_THROWS_AS(event_A(Configuration(slab_box(x, 1, 2)), x, 1, 2, 3), ExtentError);
}

TEST_CASE("event A count matches the BFS oracle") {
  for (int d = 2; d <= 3; ++d) {
    const Site x = Site::origin(d);
    for (std::uint64_t s = 0; s < 6; ++s) {
      const auto c = realize(SeedKey{2, s}, arm_support(x, 1, 2), Probability(0.45));
      CHECK(event_A(c, x, 1, 2, 10).count == reference::arm_count(c, x, 1, 2));
    }
  }
}

TEST_CASE("event A count is non-decreasing in p") {
  const Site x = Site::origin(3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    std::uint64_t prev = 0;
    for (int k = 0; k <= 10; ++k) {
      const auto rep = event_A(SeedKey{3, s}, x, 1, 2, 50, Probability(0.1 * k));
      CHECK(rep.count >= prev);
      prev = rep.count;
    }
  }
}

TEST_CASE("event A Monte Carlo matches enumeration on a trimmed instance") {
  const Site x = Site::origin(2);
  const std::int64_t ell = 1, L = 2, M = 5;
  const Configuration background(arm_support(x, ell, L));
  std::vector<Edge> free_edges;
  for (std::int64_t i = -3; i <= 2; ++i) free_edges.push_back(Edge{Site{i, 0}, 0});
  for (std::int64_t j = -3; j <= 2; ++j) free_edges.push_back(Edge{Site{0, j}, 1});
  free_edges.push_back(Edge{Site{1, 1}, 0});
  REQUIRE(free_edges.size() == 13);
  const Probability p(0.5);
  const double exact = reference::enumerate_probability(
      background, free_edges, p.value(), [&](const Configuration& c) { return event_A(c, x, ell, L, M).outcome; });
  const int R = 20000;
  int hits = 0;
  for (int r = 0; r < R; ++r) {
    hits += event_A(resample(background, free_edges, SeedKey{4, static_cast<std::uint64_t>(r)}, p), x, ell, L, M)
                .outcome;
  }
  const double sigma = std::sqrt(exact * (1 - exact) / R);
  CHECK(exact > 0.05);
  CHECK(exact < 0.95);
  CHECK(std::abs(static_cast<double>(hits) / R - exact) <= 3 * sigma);
}

TEST_CASE("close_around") {
  const auto r = Region::box(Site::origin(2), 4);
  const auto c = realize(SeedKey{5, 0}, r, Probability(0.6));
  CHECK(close_around(c, std::vector<Site>{}).same_edges(c));
  CHECK(close_around(c, region_sites(r)).open_count() == 0);
  const std::vector<Site> s1 = {Site{0, 0}, Site{1, 2}, Site{-3, 1}};
  const std::vector<Site> s2 = {Site{2, 2}, Site{0, 0}, Site{4, -4}};
  std::vector<Site> both = s1;
  both.insert(both.end(), s2.begin(), s2.end());
  const auto once = close_around(c, s1);
  CHECK(close_around(once, s2).same_edges(close_around(c, both)));
  CHECK(close_around(close_around(c, s2), s1).same_edges(close_around(c, both)));
  CHECK(close_around(once, s1).same_edges(once));
  CHECK(once.subset_of(c));
  for (const auto& e : region_edges(r)) {
    const bool touches = std::find(s1.begin(), s1.end(), e.base) != s1.end() ||
                         std::find(s1.begin(), s1.end(), e.tip()) != s1.end();
    CHECK(once.is_open(e) == (c.is_open(e) && !touches));
  }
}

TEST_CASE("event E extremes") {
  const Site x = Site::origin(3);
  const auto box = slab_box(x, 1, 2);
  const auto full = event_E(realize(SeedKey{}, box, Probability(1.0)), x, 1, 2);
  CHECK(full.outcome);
  CHECK(full.qualifying_clusters == 1);
  const auto none = event_E(Configuration(box), x, 1, 2);
  CHECK_FALSE(none.outcome);
  CHECK(none.failed_clause == 1);
  CHECK_THROWS_AS(event_E(Configuration(Region::box(x, 2)), x, 1, 2), ExtentError);
}

TEST_CASE("event E agrees with the BFS oracle") {
  for (int d = 2; d <= 3; ++d) {
    const Site x = Site::origin(d);
    const std::int64_t L = d == 2 ? 3 : 2;
    for (double p : {0.4, 0.55, 0.7}) {
      for (std::uint64_t s = 0; s < 8; ++s) {
        const auto c = realize(SeedKey{6, s}, slab_box(x, 1, L), Probability(p));
        const auto rep = event_E(c, x, 1, L);
        CHECK(rep.outcome == reference::event_E(c, x, 1, L));
        CHECK((rep.failed_clause != 1) == reference::crossing_clause(c, x, 1, L));
        const auto dia = event_E(c, x, 1, L, {RadiusConvention::diameter});
        CHECK(dia.outcome == reference::event_E(c, x, 1, L, RadiusConvention::diameter));
      }
    }
  }
}

TEST_CASE("crossing clause is increasing along a coupled sweep") {
  const Site x = Site::origin(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    bool crossed = false;
    for (int k = 0; k <= 20; ++k) {
      const auto c = realize(SeedKey{7, s}, slab_box(x, 0, 3), Probability(0.05 * k));
      const bool now = event_E(c, x, 0, 3).failed_clause != 1;
      if (crossed) CHECK(now);
      crossed = now;
    }
    CHECK(crossed);
  }
}

TEST_CASE("event E on the enumeration fixture") {
  const auto fx = reference::enumeration_fixture();
  REQUIRE(fx.free_edges.size() == 13);
  const Probability p(0.6);
  const double exact = reference::enumerate_probability(
      fx.background, fx.free_edges, p.value(),
      [&](const Configuration& c) { return event_E(c, fx.x, fx.ell, fx.L).outcome; });
  const double oracle = reference::enumerate_probability(
      fx.background, fx.free_edges, p.value(),
      [&](const Configuration& c) { return reference::event_E(c, fx.x, fx.ell, fx.L); });
  CHECK(exact == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(exact > 0.1);
  CHECK(exact < 0.9);
}

TEST_CASE("witnessed B") {
  const auto bar = single_bar();
  const Site x = Site::origin(2);
  CHECK(event_E(bar, x, 0, 1).outcome);
  const auto empty = event_B_witnessed(bar, x, 0, 1, std::vector<Site>{});
  CHECK(empty.outcome == event_E(bar, x, 0, 1).outcome);
  CHECK(empty.count == 0);
  const std::vector<Site> cut = {Site{-2, 0}, Site{2, 0}};
  const auto rep = event_B_witnessed(bar, x, 0, 1, cut);
  CHECK_FALSE(rep.outcome);
  CHECK(rep.failed_clause == 1);
  CHECK(rep.count == 2);
  CHECK(rep.kind == EventKind::B_witnessed);
}

TEST_CASE("exhaustive B") {
  const Site x = Site::origin(2);
  const auto box = slab_box(x, 0, 1);
  const auto full = realize(SeedKey{}, box, Probability(1.0));
  const auto zero = event_B_exhaustive(full, x, 0, 1, 0);
  CHECK(zero.outcome == event_E(full, x, 0, 1).outcome);
  CHECK(zero.subsets_checked == 1);
  // Removing any single site of the full 7x7 box leaves one crossing cluster.
  const auto one = event_B_exhaustive(full, x, 0, 1, 1);
  CHECK(one.outcome);
  CHECK(one.subsets_checked == 1 + box.site_count());
  // Cutting the bar at distance 1 leaves no cluster of radius > 1.
  const auto bar = event_B_exhaustive(single_bar(), x, 0, 1, 1);
  CHECK_FALSE(bar.outcome);
  REQUIRE(bar.failing_set.size() == 1);
  CHECK_FALSE(event_B_witnessed(single_bar(), x, 0, 1, bar.failing_set).outcome);
}

TEST_CASE("exhaustive B implies witnessed B") {
  const Site x = Site::origin(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = realize(SeedKey{8, s}, slab_box(x, 0, 1), Probability(0.7));
    const auto ex = event_B_exhaustive(c, x, 0, 1, 2);
    if (!ex.outcome) continue;
    const auto sites = region_sites(c.region());
    for (std::size_t i = 0; i < sites.size(); i += 5) {
      for (std::size_t j = i; j < sites.size(); j += 7) {
        CHECK(event_B_witnessed(c, x, 0, 1, std::vector<Site>{sites[i], sites[j]}).outcome);
      }
    }
  }
}

TEST_CASE("candidate restriction is sound") {
  const Site x = Site::origin(2);
  int instances = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const double p = 0.5 + 0.1 * static_cast<double>(s % 3);
    const std::int64_t M = 1 + static_cast<std::int64_t>(s % 2);
    const std::int64_t L = s % 5 == 0 ? 2 : 1;
    const auto c = realize(SeedKey{9, s}, slab_box(x, 0, L), Probability(p));
    ExhaustiveOptions all;
    all.candidates = region_sites(c.region());
    all.budget = 100'000'000;
    const auto restricted = event_B_exhaustive(c, x, 0, L, M);
    const auto full = event_B_exhaustive(c, x, 0, L, M, all);
    CHECK(restricted.outcome == full.outcome);
    ++instances;
  }
  CHECK(instances == 50);
}

TEST_CASE("exhaustive B refuses to exceed its budget") {
  const Site x = Site::origin(2);
  const auto full = realize(SeedKey{}, slab_box(x, 0, 2), Probability(1.0));
  ExhaustiveOptions opts;
  opts.budget = 1000;
  CHECK_THROWS_AS(event_B_exhaustive(full, x, 0, 2, 3, opts), BudgetExceeded);
  CHECK(subsets_up_to(5, 2) == 16);
  CHECK(subsets_up_to(5, 9) == 32);
  CHECK(subsets_up_to(10000, 10) == UINT64_MAX);
}

TEST_CASE("good boxes") {
  const Site c0 = Site::origin(2);
  CHECK(good_box(realize(SeedKey{}, Region::box(c0, 4), Probability(1.0)), c0, 4));
  CHECK_FALSE(good_box(Configuration(Region::box(c0, 4)), c0, 4));
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto c = realize(SeedKey{10, s}, Region::box(c0, 8), Probability(0.7));
    CHECK(good_box(c, c0, 8) == reference::good_box(c, c0, 8));
  }
  const auto c3 = realize(SeedKey{10, 99}, Region::box(Site::origin(3), 4), Probability(0.5));
  CHECK(good_box(c3, Site::origin(3), 4) == reference::good_box(c3, Site::origin(3), 4));
}

TEST_CASE("coarse parameters") {
  CoarseParams cp = trivial_params();
  CHECK(cp.side() == 5);
  const auto region = coarse_simulation_region(cp);
  CHECK(region.lo(0) == -6);
  CHECK(region.hi(1) == 6);
  CHECK(coarse_site(cp, 2, -1) == Site{2, -1});
  cp.L = 0;
  CHECK_THROWS_AS(cp.validate(), ConfigError);
  CHECK(parse_witness("global_proxy") == WitnessRule::global_proxy);
  CHECK_THROWS_AS(parse_witness("nope"), ConfigError);
}

TEST_CASE("all-good and all-bad fields") {
  auto cp = trivial_params();
  CoarseSample sample;
  const auto good = coarse_good_field(SeedKey{11, 0}, cp, &sample);
  CHECK(good.density() == 1.0);
  const auto rep = coarse_percolation_check(good, &sample);
  CHECK(rep.left_right_crossing);
  CHECK(rep.largest_fraction == 1.0);
  CHECK(rep.components == 1);
  CHECK(rep.chain_path.size() == 5);
  CHECK(rep.chain_links_checked == 4);
  CHECK(rep.chain_links_intersecting == 4);

  cp.M = 0;
  const auto bad = coarse_good_field(SeedKey{11, 0}, cp);
  CHECK(bad.density() == 0.0);
  const auto none = coarse_percolation_check(bad);
  CHECK_FALSE(none.left_right_crossing);
  CHECK(none.largest_fraction == 0.0);
  CHECK(none.components == 0);
}

TEST_CASE("chained clusters of adjacent good boxes intersect") {
  CoarseParams cp = trivial_params();
  cp.half_width = 0;
  cp.L = 2;
  // Two neighbouring boxes with one open cross each; the crosses overlap.
  Configuration q(coarse_simulation_region(cp));
  for (std::int64_t i = -6; i < 8; ++i) q.set(Edge{Site{i, 0}, 0}, true);
  for (std::int64_t j = -6; j < 6; ++j) {
    q.set(Edge{Site{0, j}, 1}, true);
    q.set(Edge{Site{2, j}, 1}, true);
  }
  const auto a = large_cluster_sites(q, Site{0, 0}, 0, 2);
  const auto b = large_cluster_sites(q, Site{2, 0}, 0, 2);
  std::vector<std::uint64_t> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  CHECK_FALSE(shared.empty());
  CHECK(event_E(q, Site{0, 0}, 0, 2).outcome);
  CHECK(event_E(q, Site{2, 0}, 0, 2).outcome);
}

TEST_CASE("good bits are measurable on B_x(4L)") {
  CoarseParams cp;
  cp.dim = 2;
  cp.p = Probability(0.25);
  cp.q = Probability(0.7);
  cp.L = 3;
  cp.M = 40;
  cp.half_width = 2;
  for (std::uint64_t s = 0; s < 4; ++s) {
    const SeedKey key{12, s};
    const auto field = coarse_good_field(key, cp);
    const auto full_p = realize(key, coarse_simulation_region(cp), cp.p);
    const auto full_q = realize(key, coarse_simulation_region(cp), cp.q);
    for (std::int64_t j = -cp.half_width; j <= cp.half_width; ++j) {
      for (std::int64_t i = -cp.half_width; i <= cp.half_width; ++i) {
        const Site x = coarse_site(cp, i, j);
        const Region support = arm_support(x, cp.ell, cp.L);
        // Only the serialized bits of the local support go in.
        const auto local_p = deserialize_configuration(serialize(full_p.restrict_to(support)));
        const auto local_q = deserialize_configuration(serialize(full_q.restrict_to(support)));
        CHECK(good_site(local_p, local_q, x, cp) == field.at(i, j));
      }
    }
  }
}

TEST_CASE("good density is monotone in M on shared seeds") {
  CoarseParams cp;
  cp.dim = 2;
  cp.p = Probability(0.3);
  cp.q = Probability(0.7);
  cp.L = 3;
  cp.half_width = 3;
  for (std::uint64_t s = 0; s < 3; ++s) {
    std::vector<std::uint8_t> prev;
    for (std::int64_t M : {120, 80, 60, 40, 20, 5}) {
      cp.M = M;
      const auto field = coarse_good_field(SeedKey{13, s}, cp);
      if (!prev.empty()) {
        for (std::size_t k = 0; k < prev.size(); ++k) CHECK(field.good[k] <= prev[k]);
      }
      prev = field.good;
    }
  }
}

TEST_CASE("global proxy witness runs") {
  CoarseParams cp = trivial_params();
  cp.witness = WitnessRule::global_proxy;
  cp.p = Probability(0.3);
  const auto field = coarse_good_field(SeedKey{14, 0}, cp);
  CHECK(field.good.size() == 25);
  CHECK_THROWS_AS(good_site(Configuration(coarse_simulation_region(cp)), Configuration(coarse_simulation_region(cp)),
                            Site{0, 0}, cp),
                  ConfigError);
}

TEST_CASE("coarse field text format") {
  auto cp = trivial_params();
  cp.half_width = 1;
  const auto field = coarse_good_field(SeedKey{15, 3}, cp);
  const auto text = field.to_text();
  CHECK(text.rfind("sdp-coarse-field 1\n", 0) == 0);
  CHECK(text.find("seed 15\n") != std::string::npos);
  CHECK(text.find("dependency_distance 9\n") != std::string::npos);
  CHECK(text.substr(text.find("bits\n")) == "bits\n111\n111\n111\n");
  CHECK(field.to_text() == coarse_good_field(SeedKey{15, 3}, cp).to_text());
}

}
