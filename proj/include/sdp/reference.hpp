#pragma once

// Independent reference implementations, used by the test suites and the
// `selftest` command. Nothing here is on a production path: each routine
// recomputes its answer by a different and deliberately plain method.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sdp/bounds.hpp"
#include "sdp/clustering.hpp"
#include "sdp/configuration.hpp"

namespace sdp::reference {

// Breadth-first labeling from the lowest unvisited site, with neighbours found
// by coordinate arithmetic rather than strides.
ClusterLabeling bfs_oracle(const Configuration& config);

// Same partition of the site set, compared as sets of site sets.
bool same_partition(const ClusterLabeling& a, const ClusterLabeling& b);

// E on S_l ∩ B_x(3L), from BFS clusters and explicit site lists.
bool event_E(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
             RadiusConvention conv = RadiusConvention::half_diameter);
bool crossing_clause(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L);

// y <-> ∂B_y(L) by BFS on the restriction to B_y(L).
bool reaches_distance(const Configuration& config, const Site& y, std::int64_t L);

// Number of y in S_l ∩ B_x(3L) reaching distance L.
std::uint64_t arm_count(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L);

bool good_box(const Configuration& config, const Site& center, std::int64_t ell);

using Predicate = std::function<bool(const Configuration&)>;

// Exact P[predicate] when the listed edges are i.i.d. Bernoulli(p) and every
// other edge keeps its state from `background`. At most 24 free edges.
double enumerate_probability(const Configuration& background, std::span<const Edge> free_edges, double p,
                             const Predicate& predicate);

// A d=2 instance on the slab box of x = 0 with L = 1 (the box B_0(3)) with
// 13 free edges: the bottom row y = 0, the middle of the top row y = 2, and
// two vertical ladders at x = 0 and x = 3. The outer ends of the top row are
// fixed open, every other edge fixed closed.
struct EnumerationFixture {
  Configuration background;
  std::vector<Edge> free_edges;
  Site x;
  std::int64_t ell = 0;
  std::int64_t L = 1;
};
EnumerationFixture enumeration_fixture();

// Background with each free edge resampled from the edge field at p.
Configuration fixture_sample(const EnumerationFixture& fixture, SeedKey key, Probability p);

// Two-sided chain of length n on each side: P(0 <-> {±n}) = 2 p^n - p^(2n).
double chain_one_arm_exact(double p, std::int64_t n);

// Product form of the union bound, no logarithms.
double union_bound_direct(const BoundParams& params);

}  // namespace sdp::reference
