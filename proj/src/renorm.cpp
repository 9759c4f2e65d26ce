#include "sdp/renorm.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "sdp/errors.hpp"
#include "sdp/realize.hpp"

namespace sdp {
namespace {

void require_covers(const Configuration& config, const Region& needed, const char* what) {
  if (!config.region().contains(needed)) {
    throw ExtentError(std::string(what) + ": configuration " + config.region().describe() + " does not cover " +
                      needed.describe());
  }
}

// Indices (in `box`) of box sites at l-inf distance r from x.
std::vector<std::uint64_t> shell(const Region& box, const Site& x, std::int64_t r) {
  return sites_at_distance(box, x, r);
}

// E evaluated on a configuration whose region is exactly the slab box of x.
EventReport evaluate_E_on_box(const Configuration& box_config, const Site& x, std::int64_t ell, std::int64_t L,
                              EventOptions opts) {
  const Region& box = box_config.region();
  EventReport rep;
  rep.kind = EventKind::E;
  rep.x = x;
  rep.ell = ell;
  rep.L = L;

  const auto labeling = label_clusters(box_config);
  const auto inner = shell(box, x, L);
  const auto outer = shell(box, x, 3 * L);
  const bool crossing = crossing_exists(labeling, inner, outer);
  rep.qualifying_clusters = clusters_with_radius_at_least(labeling, L + 1, opts.radius).size();
  const bool unique = rep.qualifying_clusters == 1;
  rep.failed_clause = !crossing ? 1 : (!unique ? 2 : 0);
  rep.outcome = rep.failed_clause == 0;
  return rep;
}

SiteMask mask_from_sites(const Region& region, std::span<const Site> sites) {
  SiteMask mask(region);
  for (const auto& s : sites) mask.insert(s);
  return mask;
}

// witness (on any region containing box) restricted to box.
SiteMask restrict_mask(const SiteMask& witness, const Region& box) {
  SiteMask out(box);
  std::vector<std::int64_t> c(static_cast<std::size_t>(box.dim()));
  for (std::uint64_t i = 0; i < box.site_count(); ++i) {
    box.coords_at(i, c);
    if (witness.region().contains_coords(c) && witness.test(witness.region().index_of_coords(c))) out.set(i);
  }
  return out;
}

}  // namespace

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::A: return "A";
    case EventKind::E: return "E";
    case EventKind::B_witnessed: return "B_witnessed";
    case EventKind::B_exhaustive: return "B_exhaustive";
  }
  return "?";
}

SiteMask arm_sites(const Configuration& ambient, const Region& within, std::int64_t L) {
  const Region& region = ambient.region();
  // Every probe ball must fit in the ambient region.
  std::vector<std::int64_t> lo, hi;
  for (int a = 0; a < within.dim(); ++a) {
    lo.push_back(within.lo(a) - L);
    hi.push_back(within.hi(a) + L);
  }
  require_covers(ambient, Region::from_bounds(lo, hi), "arm_sites");

  SiteMask mask(region);
  const auto n = static_cast<std::int64_t>(within.site_count());
#pragma omp parallel
  {
    ArmProbe probe(ambient);
    std::vector<std::int64_t> c(static_cast<std::size_t>(within.dim()));
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < n; ++i) {
      within.coords_at(static_cast<std::uint64_t>(i), c);
      const auto idx = region.index_of_coords(c);
      if (probe.reaches(idx, L)) mask.set(idx);
    }
  }
  return mask;
}

EventReport event_A(const Configuration& ambient, const Site& x, std::int64_t ell, std::int64_t L, std::int64_t M) {
  const Region box = slab_box(x, ell, L);
  require_covers(ambient, arm_support(x, ell, L), "event_A");
  const auto mask = arm_sites(ambient, box, L);
  EventReport rep;
  rep.kind = EventKind::A;
  rep.x = x;
  rep.ell = ell;
  rep.L = L;
  rep.M = M;
  rep.count = mask.count();
  rep.outcome = static_cast<std::int64_t>(rep.count) < M;
  return rep;
}

EventReport event_A(SeedKey key, const Site& x, std::int64_t ell, std::int64_t L, std::int64_t M, Probability p) {
  const auto ambient = realize(key, arm_support(x, ell, L), p);
  return event_A(ambient, x, ell, L, M);
}

Configuration close_around(const Configuration& config, std::span<const Site> sites) {
  return close_sites(config, mask_from_sites(config.region(), sites));
}

EventReport event_E(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L, EventOptions opts) {
  const Region box = slab_box(x, ell, L);
  require_covers(config, box, "event_E");
  return evaluate_E_on_box(config.region() == box ? config : config.restrict_to(box), x, ell, L, opts);
}

EventReport event_B_witnessed(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                              const SiteMask& witness, EventOptions opts) {
  const Region box = slab_box(x, ell, L);
  require_covers(config, box, "event_B_witnessed");
  const auto local = restrict_mask(witness, box);
  auto rep = evaluate_E_on_box(close_sites(config.restrict_to(box), local), x, ell, L, opts);
  rep.kind = EventKind::B_witnessed;
  rep.count = local.count();
  return rep;
}

EventReport event_B_witnessed(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                              std::span<const Site> witness, EventOptions opts) {
  return event_B_witnessed(config, x, ell, L, mask_from_sites(config.region(), witness), opts);
}

std::vector<Site> default_candidates(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                                     EventOptions opts) {
  const Region box = slab_box(x, ell, L);
  require_covers(config, box, "default_candidates");
  const auto sub = config.restrict_to(box);
  const auto labeling = label_clusters(sub);
  std::vector<Site> out;
  for (std::uint64_t i = 0; i < box.site_count(); ++i) {
    // radius > L/2  <=>  2 * radius > L
    if (2 * labeling.stats(labeling.cluster_of(i)).radius(opts.radius) > L) out.push_back(box.site_at(i));
  }
  return out;
}

std::uint64_t subsets_up_to(std::uint64_t n, std::uint64_t M) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t term = 1;  // C(n, k)
  for (std::uint64_t k = 0; k <= std::min(n, M); ++k) {
    if (total > kMax - term) return kMax;
    total += term;
    if (k == n) break;
    // term * (n - k) / (k + 1), exact in 128 bits
    const unsigned __int128 next = static_cast<unsigned __int128>(term) * (n - k) / (k + 1);
    if (next > kMax) return kMax;
    term = static_cast<std::uint64_t>(next);
  }
  return total;
}

EventReport event_B_exhaustive(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                               std::int64_t M, const ExhaustiveOptions& opts) {
  if (M < 0) throw ConfigError("event_B_exhaustive: M must be >= 0");
  const Region box = slab_box(x, ell, L);
  require_covers(config, box, "event_B_exhaustive");
  const auto sub = config.restrict_to(box);

  // Candidates outside the slab box touch no edge that E looks at.
  std::vector<std::uint64_t> pool;
  {
    const auto sites = opts.candidates ? *opts.candidates : default_candidates(config, x, ell, L, opts.event);
    for (const auto& s : sites) {
      if (!config.region().contains(s)) throw ExtentError("candidate " + s.to_string() + " outside configuration");
      if (box.contains(s)) pool.push_back(box.index_of(s));
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }

  const auto n = static_cast<std::uint64_t>(pool.size());
  const auto needed = subsets_up_to(n, static_cast<std::uint64_t>(M));
  if (needed > opts.budget) {
    throw BudgetExceeded("event_B_exhaustive: " + std::to_string(n) + " candidates with M=" + std::to_string(M) +
                         " need " + std::to_string(needed) + " subsets, budget is " + std::to_string(opts.budget));
  }

  EventReport rep;
  rep.kind = EventKind::B_exhaustive;
  rep.x = x;
  rep.ell = ell;
  rep.L = L;
  rep.M = M;
  rep.outcome = true;

  const auto kmax = static_cast<std::size_t>(std::min<std::uint64_t>(n, static_cast<std::uint64_t>(M)));
  std::vector<std::size_t> pick;
  for (std::size_t k = 0; k <= kmax; ++k) {
    pick.resize(k);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
      SiteMask mask(box);
      for (auto p : pick) mask.set(pool[p]);
      const auto e = evaluate_E_on_box(close_sites(sub, mask), x, ell, L, opts.event);
      ++rep.subsets_checked;
      if (!e.outcome) {
        rep.outcome = false;
        rep.failed_clause = e.failed_clause;
        rep.qualifying_clusters = e.qualifying_clusters;
        rep.count = k;
        for (auto p : pick) rep.failing_set.push_back(box.site_at(pool[p]));
        return rep;
      }
      // Next k-combination of [0, n) in lexicographic order.
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return rep;
}

bool good_box(const Configuration& config, const Site& center, std::int64_t ell) {
  const Region box = Region::box(center, ell);
  require_covers(config, box, "good_box");
  const auto sub = config.restrict_to(box);
  const auto labeling = label_clusters(sub);
  const int d = box.dim();

  std::vector<std::int64_t> c(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    std::vector<std::uint64_t> low, high;
    for (std::uint64_t i = 0; i < box.site_count(); ++i) {
      box.coords_at(i, c);
      if (c[static_cast<std::size_t>(a)] == box.lo(a)) low.push_back(i);
      if (c[static_cast<std::size_t>(a)] == box.hi(a)) high.push_back(i);
    }
    if (!crossing_exists(labeling, low, high)) return false;
  }
  std::uint32_t big = 0;
  for (std::uint32_t k = 0; k < labeling.cluster_count(); ++k) {
    if (4 * labeling.stats(k).linf_diameter >= ell) ++big;
  }
  return big <= 1;
}

// ---------------------------------------------------------------------------

const char* witness_name(WitnessRule rule) {
  return rule == WitnessRule::arm_sites ? "arm_sites" : "global_proxy";
}

WitnessRule parse_witness(const std::string& text) {
  if (text == "arm_sites" || text == "arm") return WitnessRule::arm_sites;
  if (text == "global_proxy" || text == "proxy") return WitnessRule::global_proxy;
  throw ConfigError("unknown witness rule '" + text + "' (expected arm_sites or global_proxy)");
}

void CoarseParams::validate() const {
  check_dimension(dim);
  if (ell < 0) throw ConfigError("ell must be >= 0");
  if (L < 1) throw ConfigError("L must be >= 1");
  if (M < 0) throw ConfigError("M must be >= 0");
  if (half_width < 0) throw ConfigError("coarse half width must be >= 0");
}

Region coarse_simulation_region(const CoarseParams& params) {
  params.validate();
  std::vector<std::int64_t> lo, hi;
  for (int a = 0; a < params.dim; ++a) {
    const std::int64_t half = a < 2 ? params.half_width * params.L + 4 * params.L : params.ell + params.L;
    lo.push_back(-half);
    hi.push_back(half);
  }
  return Region::from_bounds(std::move(lo), std::move(hi));
}

Site coarse_site(const CoarseParams& params, std::int64_t i, std::int64_t j) {
  Site x = Site::origin(params.dim);
  x[0] = i * params.L;
  x[1] = j * params.L;
  return x;
}

namespace {

double fraction(const std::vector<std::uint8_t>& bits) {
  if (bits.empty()) return 0.0;
  return static_cast<double>(std::accumulate(bits.begin(), bits.end(), std::uint64_t{0})) /
         static_cast<double>(bits.size());
}

}  // namespace

double CoarseField::density() const { return fraction(good); }
double CoarseField::a_density() const { return fraction(a_holds); }
double CoarseField::b_density() const { return fraction(b_holds); }

std::string CoarseField::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "sdp-coarse-field 1\n";
  os << "d " << params.dim << '\n';
  os << "p " << params.p.value() << '\n';
  os << "q " << params.q.value() << '\n';
  os << "eps " << params.eps << '\n';
  os << "p_c " << params.p_c_input << '\n';
  os << "ell " << params.ell << '\n';
  os << "L " << params.L << '\n';
  os << "M " << params.M << '\n';
  os << "radius " << (params.event.radius == RadiusConvention::half_diameter ? "half_diameter" : "diameter") << '\n';
  os << "witness " << witness_name(params.witness) << '\n';
  os << "proxy " << params.proxy.to_string() << '\n';
  os << "seed " << key.experiment_seed << '\n';
  os << "replica " << key.replica_index << '\n';
  os << "half_width " << params.half_width << '\n';
  os << "dependency_distance " << dependency_distance() << '\n';
  os << "bits\n";
  for (std::int64_t j = -params.half_width; j <= params.half_width; ++j) {
    for (std::int64_t i = -params.half_width; i <= params.half_width; ++i) os << (at(i, j) ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

bool good_site(const Configuration& omega_p, const Configuration& omega_q, const Site& x, const CoarseParams& params) {
  if (params.witness != WitnessRule::arm_sites) {
    throw ConfigError("good_site: only the arm_sites witness rule is local");
  }
  const Region support = arm_support(x, params.ell, params.L);
  require_covers(omega_p, support, "good_site");
  const Region box = slab_box(x, params.ell, params.L);
  require_covers(omega_q, box, "good_site");
  const auto arms = arm_sites(omega_p, box, params.L);
  if (static_cast<std::int64_t>(arms.count()) >= params.M) return false;
  return event_B_witnessed(omega_q, x, params.ell, params.L, arms, params.event).outcome;
}

CoarseField coarse_good_field(SeedKey key, const CoarseParams& params, CoarseSample* sample) {
  const Region region = coarse_simulation_region(params);
  auto omega_p = realize(key, region, params.p, Layer::omega_p);
  auto omega_q = realize(key, region, params.q, Layer::omega_p);

  // Union of all slab boxes.
  std::vector<std::int64_t> lo, hi;
  for (int a = 0; a < params.dim; ++a) {
    const std::int64_t half = a < 2 ? params.half_width * params.L + 3 * params.L : params.ell;
    lo.push_back(-half);
    hi.push_back(half);
  }
  const Region boxes = Region::from_bounds(lo, hi);
  const auto arms = arm_sites(omega_p, boxes, params.L);
  SiteMask witness = params.witness == WitnessRule::arm_sites ? arms
                                                              : infinite_cluster_proxy(omega_p, params.proxy).sites;

  CoarseField field;
  field.params = params;
  field.key = key;
  const auto side = params.side();
  const auto cells = static_cast<std::int64_t>(side * side);
  field.good.assign(static_cast<std::size_t>(cells), 0);
  field.a_holds.assign(static_cast<std::size_t>(cells), 0);
  field.b_holds.assign(static_cast<std::size_t>(cells), 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const std::int64_t i = cell % side - params.half_width;
    const std::int64_t j = cell / side - params.half_width;
    const Site x = coarse_site(params, i, j);
    const Region box = slab_box(x, params.ell, params.L);
    const auto a_count = restrict_mask(arms, box).count();
    const bool a = static_cast<std::int64_t>(a_count) < params.M;
    const bool b = event_B_witnessed(omega_q, x, params.ell, params.L, witness, params.event).outcome;
    field.a_holds[static_cast<std::size_t>(cell)] = a;
    field.b_holds[static_cast<std::size_t>(cell)] = b;
    field.good[static_cast<std::size_t>(cell)] = a && b;
  }

  if (sample) {
    omega_q.set_provenance(key, params.q.value(), Layer::derived);
    *sample = CoarseSample{std::move(omega_p), std::move(omega_q), std::move(witness)};
  }
  return field;
}

std::vector<std::uint64_t> large_cluster_sites(const Configuration& config, const Site& x, std::int64_t ell,
                                               std::int64_t L, EventOptions opts) {
  const Region box = slab_box(x, ell, L);
  require_covers(config, box, "large_cluster_sites");
  const auto labeling = label_clusters(config.restrict_to(box));
  std::vector<std::uint8_t> large(labeling.cluster_count(), 0);
  for (const auto& st : clusters_with_radius_at_least(labeling, L + 1, opts.radius)) large[labeling.cluster_of(st.root)] = 1;
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < box.site_count(); ++i) {
    if (large[labeling.cluster_of(i)]) out.push_back(config.region().index_of(box.site_at(i)));
  }
  return out;
}

CoarsePercolationReport coarse_percolation_check(const CoarseField& field, const CoarseSample* sample) {
  CoarsePercolationReport rep;
  const auto side = field.side();
  const auto K = field.params.half_width;
  const auto cells = static_cast<std::size_t>(side * side);
  if (field.good.size() != cells) throw ConfigError("coarse_percolation_check: malformed field");

  std::vector<std::int64_t> comp(cells, -1);
  std::vector<std::uint64_t> comp_size;
  std::vector<std::uint8_t> touches_left, touches_right;
  for (std::size_t start = 0; start < cells; ++start) {
    if (!field.good[start] || comp[start] >= 0) continue;
    const auto id = static_cast<std::int64_t>(comp_size.size());
    comp_size.push_back(0);
    touches_left.push_back(0);
    touches_right.push_back(0);
    std::deque<std::size_t> queue{start};
    comp[start] = id;
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      ++comp_size.back();
      const auto ci = static_cast<std::int64_t>(cur) % side;
      const auto cj = static_cast<std::int64_t>(cur) / side;
      if (ci == 0) touches_left.back() = 1;
      if (ci == side - 1) touches_right.back() = 1;
      const std::int64_t di[] = {1, -1, 0, 0};
      const std::int64_t dj[] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const auto ni = ci + di[k];
        const auto nj = cj + dj[k];
        if (ni < 0 || nj < 0 || ni >= side || nj >= side) continue;
        const auto nb = static_cast<std::size_t>(nj * side + ni);
        if (field.good[nb] && comp[nb] < 0) {
          comp[nb] = id;
          queue.push_back(nb);
        }
      }
    }
  }
  rep.components = comp_size.size();
  rep.good_sites = std::accumulate(comp_size.begin(), comp_size.end(), std::uint64_t{0});
  if (!comp_size.empty()) {
    rep.largest_fraction =
        static_cast<double>(*std::max_element(comp_size.begin(), comp_size.end())) / static_cast<double>(cells);
  }
  for (std::size_t c = 0; c < comp_size.size(); ++c) {
    if (touches_left[c] && touches_right[c]) rep.left_right_crossing = true;
  }

  if (!rep.left_right_crossing || !sample) return rep;

  // Shortest good path from the left column to the right column.
  std::vector<std::int64_t> prev(cells, -2);
  std::deque<std::size_t> queue;
  for (std::int64_t j = 0; j < side; ++j) {
    const auto s = static_cast<std::size_t>(j * side);
    if (field.good[s]) {
      prev[s] = -1;
      queue.push_back(s);
    }
  }
  std::int64_t end = -1;
  while (!queue.empty() && end < 0) {
    const auto cur = queue.front();
    queue.pop_front();
    const auto ci = static_cast<std::int64_t>(cur) % side;
    const auto cj = static_cast<std::int64_t>(cur) / side;
    if (ci == side - 1) {
      end = static_cast<std::int64_t>(cur);
      break;
    }
    const std::int64_t di[] = {1, 0, 0, -1};
    const std::int64_t dj[] = {0, 1, -1, 0};
    for (int k = 0; k < 4; ++k) {
      const auto ni = ci + di[k];
      const auto nj = cj + dj[k];
      if (ni < 0 || nj < 0 || ni >= side || nj >= side) continue;
      const auto nb = static_cast<std::size_t>(nj * side + ni);
      if (field.good[nb] && prev[nb] == -2) {
        prev[nb] = static_cast<std::int64_t>(cur);
        queue.push_back(nb);
      }
    }
  }
  for (auto cur = end; cur >= 0; cur = prev[static_cast<std::size_t>(cur)]) {
    rep.chain_path.emplace_back(cur % side - K, cur / side - K);
  }
  std::reverse(rep.chain_path.begin(), rep.chain_path.end());

  const auto removed = close_sites(sample->omega_q, sample->witness);
  std::vector<std::uint64_t> previous;
  for (std::size_t k = 0; k < rep.chain_path.size(); ++k) {
    const auto [i, j] = rep.chain_path[k];
    auto sites = large_cluster_sites(removed, coarse_site(field.params, i, j), field.params.ell, field.params.L,
                                     field.params.event);
    std::sort(sites.begin(), sites.end());
    if (k > 0) {
      ++rep.chain_links_checked;
      std::vector<std::uint64_t> shared;
      std::set_intersection(previous.begin(), previous.end(), sites.begin(), sites.end(), std::back_inserter(shared));
      if (!shared.empty()) ++rep.chain_links_intersecting;
    }
    previous = std::move(sites);
  }
  return rep;
}

}  // namespace sdp
