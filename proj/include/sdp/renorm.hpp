#pragma once

// Renormalization events on slab boxes S_l ∩ B_x(3L) and the coarse good-site
// field on L Z^2.
//
//   A(x,l,L,M): fewer than M sites y of S_l ∩ B_x(3L) with y <-> ∂B_y(L),
//               the connection anywhere inside B_y(L).
//   E(x,l,L):   (1) a crossing from ∂B_x(L) to ∂B_x(3L) inside S_l ∩ B_x(3L);
//               (2) exactly one cluster of S_l ∩ B_x(3L) with radius > L.
//   B:          E holds in omega^S for every |S| <= M; evaluated either at one
//               witness set or exhaustively over a candidate pool.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdp/clustering.hpp"
#include "sdp/configuration.hpp"
#include "sdp/process.hpp"

namespace sdp {

enum class EventKind : std::uint8_t { A, E, B_witnessed, B_exhaustive };
const char* event_name(EventKind kind);

struct EventReport {
  EventKind kind = EventKind::E;
  Site x;
  std::int64_t ell = 0;
  std::int64_t L = 0;
  std::int64_t M = -1;  // -1 where M plays no role
  bool outcome = false;

  // A: number of sites reaching distance L. B: size of the set S removed.
  std::uint64_t count = 0;
  // E and B: 0 when both clauses hold, else the first failing clause (1 or 2).
  int failed_clause = 0;
  std::uint64_t qualifying_clusters = 0;
  // B_exhaustive: subsets examined and the first (smallest) failing set.
  std::uint64_t subsets_checked = 0;
  std::vector<Site> failing_set;
};

struct EventOptions {
  RadiusConvention radius = RadiusConvention::half_diameter;
};

// Marks every y of `within` with y <-> ∂B_y(L); the mask lives on the ambient region.
// Parallel over sites.
SiteMask arm_sites(const Configuration& ambient, const Region& within, std::int64_t L);

EventReport event_A(const Configuration& ambient, const Site& x, std::int64_t ell, std::int64_t L, std::int64_t M);
// Realizes omega_p on arm_support(x, l, L) first.
EventReport event_A(SeedKey key, const Site& x, std::int64_t ell, std::int64_t L, std::int64_t M, Probability p);

// omega^S; every site of S must lie in the configuration region.
Configuration close_around(const Configuration& config, std::span<const Site> sites);

EventReport event_E(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                    EventOptions opts = {});

EventReport event_B_witnessed(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                              std::span<const Site> witness, EventOptions opts = {});
EventReport event_B_witnessed(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                              const SiteMask& witness, EventOptions opts = {});

struct ExhaustiveOptions {
  // Defaults to the sites of clusters with radius > L/2 in the slab box.
  std::optional<std::vector<Site>> candidates;
  std::uint64_t budget = 1'000'000;  // maximum number of subsets examined
  EventOptions event;
};

// Sites on clusters of S_l ∩ B_x(3L) whose radius exceeds L/2.
std::vector<Site> default_candidates(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                                     EventOptions opts = {});

// Number of subsets of size <= M drawn from n candidates, saturating at UINT64_MAX.
std::uint64_t subsets_up_to(std::uint64_t n, std::uint64_t M);

EventReport event_B_exhaustive(const Configuration& config, const Site& x, std::int64_t ell, std::int64_t L,
                               std::int64_t M, const ExhaustiveOptions& opts = {});

// Box B_center(l) of side 2l+1: opposite-face crossings along every axis, and
// at most one cluster of diameter >= l/4 inside the box.
bool good_box(const Configuration& config, const Site& center, std::int64_t ell);

// ---------------------------------------------------------------------------
// Coarse field

enum class WitnessRule : std::uint8_t {
  arm_sites,     // S = {y in S_l ∩ B_x(3L) : y <-> ∂B_y(L) in omega_p}; local to B_x(4L)
  global_proxy,  // S = proxy(omega_p) ∩ S_l ∩ B_x(3L) over the whole simulation region
};
const char* witness_name(WitnessRule rule);
WitnessRule parse_witness(const std::string& text);

struct CoarseParams {
  int dim = 2;
  Probability p{0.5};  // omega_p, the configuration whose infinite cluster is removed
  Probability q{0.6};  // omega_{p_c + eps}
  double eps = 0.1;
  double p_c_input = 0.5;
  std::int64_t ell = 1;
  std::int64_t L = 2;
  std::int64_t M = 10;
  std::int64_t half_width = 2;  // coarse sites (iL, jL) with |i|, |j| <= half_width
  EventOptions event;
  WitnessRule witness = WitnessRule::arm_sites;
  ProxyRule proxy = ProxyRule::boundary();

  std::int64_t side() const { return 2 * half_width + 1; }
  void validate() const;
};

// Sites within K L + 4L on the first two axes and l + L on the rest.
Region coarse_simulation_region(const CoarseParams& params);

Site coarse_site(const CoarseParams& params, std::int64_t i, std::int64_t j);

// Coarse sites at l-inf coarse distance >= this use disjoint edge sets.
inline constexpr std::int64_t kCoarseIndependenceDistance = 9;

struct CoarseField {
  CoarseParams params;
  SeedKey key;
  // Row-major: row j (second axis) from -K to K, column i from -K to K.
  std::vector<std::uint8_t> good;
  std::vector<std::uint8_t> a_holds;
  std::vector<std::uint8_t> b_holds;

  std::int64_t side() const { return params.side(); }
  std::size_t offset(std::int64_t i, std::int64_t j) const {
    return static_cast<std::size_t>((j + params.half_width) * side() + (i + params.half_width));
  }
  bool at(std::int64_t i, std::int64_t j) const { return good[offset(i, j)] != 0; }
  double density() const;
  double a_density() const;
  double b_density() const;
  std::int64_t dependency_distance() const { return kCoarseIndependenceDistance; }

  // Plain-text grid: "key value" header lines, then `side` rows of 0/1.
  std::string to_text() const;
};

// Configurations behind a field, kept for chaining checks and replay.
struct CoarseSample {
  Configuration omega_p;
  Configuration omega_q;
  SiteMask witness;
};

CoarseField coarse_good_field(SeedKey key, const CoarseParams& params, CoarseSample* sample = nullptr);

// Good bit at x computed from configurations covering arm_support(x) only.
// Valid for WitnessRule::arm_sites.
bool good_site(const Configuration& omega_p, const Configuration& omega_q, const Site& x, const CoarseParams& params);

struct CoarsePercolationReport {
  bool left_right_crossing = false;
  double largest_fraction = 0.0;
  std::uint64_t good_sites = 0;
  std::uint64_t components = 0;
  // Chaining along one crossing path; only filled when a sample is supplied.
  std::vector<std::pair<std::int64_t, std::int64_t>> chain_path;
  std::uint64_t chain_links_checked = 0;
  std::uint64_t chain_links_intersecting = 0;
};

CoarsePercolationReport coarse_percolation_check(const CoarseField& field, const CoarseSample* sample = nullptr);

// Sites (as indices of the configuration region) of clusters with radius > L in
// S_l ∩ B_x(3L) of `config`.
std::vector<std::uint64_t> large_cluster_sites(const Configuration& config, const Site& x, std::int64_t ell,
                                               std::int64_t L, EventOptions opts = {});

}  // namespace sdp
