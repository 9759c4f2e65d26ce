#include "sdp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "sdp/errors.hpp"

namespace sdp::reference {
namespace {

// Open neighbours of s inside the configuration region.
std::vector<Site> open_neighbours(const Configuration& config, const Site& s) {
  std::vector<Site> out;
  const Region& r = config.region();
  for (int a = 0; a < s.dim(); ++a) {
    Site up = s;
    up[a] += 1;
    if (r.contains(up) && config.is_open(Edge{s, a})) out.push_back(up);
    Site down = s;
    down[a] -= 1;
    if (r.contains(down) && config.is_open(Edge{down, a})) out.push_back(down);
  }
  return out;
}

std::vector<std::vector<Site>> clusters_by_bfs(const Configuration& config) {
  const Region& r = config.region();
  std::set<Site> seen;
  std::vector<std::vector<Site>> clusters;
  for (const auto& start : region_sites(r)) {
    if (seen.count(start)) continue;
    std::vector<Site> members;
    std::queue<Site> q;
    q.push(start);
    seen.insert(start);
    while (!q.empty()) {
      Site s = q.front();
      q.pop();
      members.push_back(s);
      for (auto& nb : open_neighbours(config, s)) {
        if (seen.insert(nb).second) q.push(nb);
      }
    }
    clusters.push_back(std::move(members));
  }
  return clusters;
}

std::int64_t diameter_of(const std::vector<Site>& members) {
  std::int64_t best = 0;
  const int d = members.front().dim();
  for (int a = 0; a < d; ++a) {
    std::int64_t lo = members.front()[a], hi = lo;
    for (const auto& s : members) {
      lo = std::min(lo, s[a]);
      hi = std::max(hi, s[a]);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

std::int64_t radius_of(std::int64_t diameter, RadiusConvention conv) {
  return conv == RadiusConvention::half_diameter ? diameter / 2 : diameter;
}

bool meets(const std::vector<Site>& members, const std::function<bool(const Site&)>& pred) {
  return std::any_of(members.begin(), members.end(), pred);
}

}  // namespace

ClusterLabeling bfs_oracle(const Configuration& config) {
  const Region& r = config.region();
  const int d = r.dim();
  const auto clusters = clusters_by_bfs(config);
  std::vector<std::uint32_t> cluster_of(r.site_count());
  std::vector<std::uint32_t> roots, sizes;
  std::vector<std::int32_t> lo, hi;
  for (std::uint32_t id = 0; id < clusters.size(); ++id) {
    const auto& members = clusters[id];
    std::uint64_t root = r.site_count();
    for (const auto& s : members) {
      const auto idx = r.index_of(s);
      cluster_of[idx] = id;
      root = std::min(root, idx);
    }
    roots.push_back(static_cast<std::uint32_t>(root));
    sizes.push_back(static_cast<std::uint32_t>(members.size()));
    for (int a = 0; a < d; ++a) {
      std::int64_t mn = members.front()[a], mx = mn;
      for (const auto& s : members) {
        mn = std::min(mn, s[a]);
        mx = std::max(mx, s[a]);
      }
      lo.push_back(static_cast<std::int32_t>(mn - r.lo(a)));
      hi.push_back(static_cast<std::int32_t>(mx - r.lo(a)));
    }
  }
  return ClusterLabeling(r, std::move(cluster_of), std::move(roots), std::move(sizes), std::move(lo), std::move(hi));
}

bool same_partition(const ClusterLabeling& a, const ClusterLabeling& b) {
  if (!(a.region() == b.region())) return false;
  auto sets = [](const ClusterLabeling& l) {
    std::map<std::uint32_t, std::set<std::uint64_t>> by_id;
    for (std::uint64_t i = 0; i < l.region().site_count(); ++i) by_id[l.cluster_of(i)].insert(i);
    std::set<std::set<std::uint64_t>> out;
    for (auto& [id, s] : by_id) out.insert(std::move(s));
    return out;
  };
  return sets(a) == sets(b);
}

namespace {

struct BoxClusters {
  Region box;
  std::vector<std::vector<Site>> clusters;
};

BoxClusters slab_clusters(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L) {
  const Region box = slab_box(x, ell, L);
  return {box, clusters_by_bfs(config.restrict_to(box))};
}

bool crossing_in(const BoxClusters& bc, const Site& x, std::int64_t L) {
  for (const auto& members : bc.clusters) {
    const bool inner = meets(members, [&](const Site& s) { return linf_distance(s, x) == L; });
    const bool outer = meets(members, [&](const Site& s) { return linf_distance(s, x) == 3 * L; });
    if (inner && outer) return true;
  }
  return false;
}

}  // namespace

bool crossing_clause(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L) {
  return crossing_in(slab_clusters(config, x, ell, L), x, L);
}

bool event_E(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L, RadiusConvention conv) {
  const auto bc = slab_clusters(config, x, ell, L);
  if (!crossing_in(bc, x, L)) return false;
  int large = 0;
  for (const auto& members : bc.clusters) {
    if (radius_of(diameter_of(members), conv) > L) ++large;
  }
  return large == 1;
}

bool reaches_distance(const Configuration& config, const Site& y, std::int64_t L) {
  if (L <= 0) return true;
  const Region ball = Region::box(y, L);
  for (const auto& members : clusters_by_bfs(config.restrict_to(ball))) {
    if (std::find(members.begin(), members.end(), y) == members.end()) continue;
    return meets(members, [&](const Site& s) { return linf_distance(s, y) == L; });
  }
  return false;
}

std::uint64_t arm_count(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L) {
  std::uint64_t n = 0;
  for (const auto& y : region_sites(slab_box(x, ell, L))) n += reference::reaches_distance(config, y, L) ? 1 : 0;
  return n;
}

bool good_box(const Configuration& config, const Site& center, std::int64_t ell) {
  const Region box = Region::box(center, ell);
  const auto clusters = clusters_by_bfs(config.restrict_to(box));
  for (int a = 0; a < center.dim(); ++a) {
    bool crossed = false;
    for (const auto& members : clusters) {
      const bool low = meets(members, [&](const Site& s) { return s[a] == center[a] - ell; });
      const bool high = meets(members, [&](const Site& s) { return s[a] == center[a] + ell; });
      if (low && high) {
        crossed = true;
        break;
      }
    }
    if (!crossed) return false;
  }
  int big = 0;
  for (const auto& members : clusters) {
    if (static_cast<double>(diameter_of(members)) >= static_cast<double>(ell) / 4.0) ++big;
  }
  return big <= 1;
}

double enumerate_probability(const Configuration& background, std::span<const Edge> free_edges, double p,
                             const Predicate& predicate) {
  if (free_edges.size() > 24) throw BudgetExceeded("enumerate_probability: more than 24 free edges");
  const std::uint64_t total = std::uint64_t{1} << free_edges.size();
  double prob = 0.0;
  Configuration work = background;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    int open = 0;
    for (std::size_t k = 0; k < free_edges.size(); ++k) {
      const bool on = (mask >> k) & 1U;
      work.set(free_edges[k], on);
      open += on ? 1 : 0;
    }
    if (predicate(work)) {
      const int closed = static_cast<int>(free_edges.size()) - open;
      prob += std::pow(p, open) * std::pow(1.0 - p, closed);
    }
  }
  return prob;
}

EnumerationFixture enumeration_fixture() {
  EnumerationFixture f;
  f.x = Site{0, 0};
  const Region box = slab_box(f.x, f.ell, f.L);
  f.background = Configuration(box);
  for (std::int64_t i = -3; i <= 2; ++i) f.free_edges.push_back(Edge{Site{i, 0}, 0});
  for (std::int64_t i = -1; i <= 1; ++i) f.free_edges.push_back(Edge{Site{i, 2}, 0});
  f.free_edges.push_back(Edge{Site{0, 0}, 1});
  f.free_edges.push_back(Edge{Site{0, 1}, 1});
  f.free_edges.push_back(Edge{Site{3, 0}, 1});
  f.free_edges.push_back(Edge{Site{3, 1}, 1});
  for (std::int64_t i : {-3, -2, 2}) f.background.set(Edge{Site{i, 2}, 0}, true);
  return f;
}

Configuration fixture_sample(const EnumerationFixture& fixture, SeedKey key, Probability p) {
  Configuration c = fixture.background;
  for (const auto& e : fixture.free_edges) c.set(e, edge_label(key, canonical_edge_id(e)) < p.threshold() || p.is_one());
  return c;
}

double chain_one_arm_exact(double p, std::int64_t n) {
  const double side = std::pow(p, static_cast<double>(n));
  return 2.0 * side - side * side;
}

double union_bound_direct(const BoundParams& params) {
  const double dm = static_cast<double>(params.dim) * static_cast<double>(params.M);
  return std::pow(1.0 - params.p_c_input - params.eps, -2.0 * dm) *
         std::pow(6.0 * static_cast<double>(params.L) + 1.0, dm) * std::exp(-params.c * static_cast<double>(params.L));
}

}  // namespace sdp::reference
