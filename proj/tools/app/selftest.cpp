#include <cmath>
#include <sstream>

#include "commands.hpp"
#include "sdp/bounds.hpp"
#include "sdp/estimators.hpp"
#include "sdp/realize.hpp"
#include "sdp/reference.hpp"
#include "sdp/renorm.hpp"
#include "sdp/serialize.hpp"

namespace sdp::app {
namespace {

std::string show(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

SelfCheck equal_count(const std::string& name, std::uint64_t got, std::uint64_t want) {
  return {name, got == want, "got " + std::to_string(got) + ", want " + std::to_string(want)};
}

SelfCheck close_rel(const std::string& name, double got, double want, double tol) {
  const bool ok = std::abs(got - want) <= tol * std::abs(want);
  return {name, ok, "got " + show(got) + ", want " + show(want) + " (rel tol " + show(tol) + ")"};
}

SelfCheck within_sigma(const std::string& name, const Estimate& est, double exact) {
  const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(est.replicas));
  const bool ok = std::abs(est.mean - exact) <= 3.0 * sigma + 1e-12;
  return {name, ok, "estimate " + show(est.mean) + ", exact " + show(exact) + ", 3 sigma " + show(3 * sigma)};
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  std::vector<SelfCheck> out;

  // Region sizes.
  out.push_back(equal_count("sites of B_0(4), d=7", Region::box(Site::origin(7), 4).site_count(), 4782969));
  out.push_back(equal_count("boundary of B_0(2), d=2", boundary_sites(Region::box(Site::origin(2), 2)).size(), 16));
  out.push_back(equal_count("edges of B_0(1), d=2", region_edges(Region::box(Site::origin(2), 1)).size(), 12));
  out.push_back(equal_count("edges of B_0(1), d=3", region_edges(Region::box(Site::origin(3), 1)).size(), 54));
  out.push_back(equal_count("slab box d=4 l=1 L=1", slab_box(Site::origin(4), 1, 1).site_count(), 441));
  out.push_back(equal_count("slab box d=3 x=(5,0,0) l=2 L=2", slab_box(Site{5, 0, 0}, 2, 2).site_count(), 845));

  // Bound calculators.
  out.push_back(equal_count("markov_bound_M(1, 1, 0.1, 7)", markov_bound_M(1, 1.0, 0.1, 7), 119071));
  out.push_back(close_rel("peierls_bound(1, 1)", peierls_bound(1, 1), 14.4, 1e-12));
  out.push_back(close_rel("peierls_bound(1, 10)", peierls_bound(1, 10), 0.37748736, 1e-12));
  {
    BoundParams bp;
    bp.dim = 2;
    bp.M = 1;
    bp.L = 10;
    bp.p_c_input = 0.5;
    bp.eps = 0.1;
    bp.c = 1.0;
    out.push_back(close_rel("union_bound_FM(d=2, M=1, L=10)", union_bound_FM(bp).value, 6.5996, 1e-3));
    out.push_back(close_rel("union bound log vs direct", union_bound_FM(bp).value, reference::union_bound_direct(bp),
                            1e-12));
  }

  // Union-find against BFS.
  {
    int mismatches = 0;
    int trials = 0;
    for (int d = 2; d <= 4; ++d) {
      for (std::int64_t r = 1; r <= 3; ++r) {
        if (d == 4 && r == 3) continue;
        for (double p : {0.2, 0.5, 0.8}) {
          const auto key = SeedKey{7, static_cast<std::uint64_t>(100 * d + 10 * r) + static_cast<std::uint64_t>(p * 10)};
          const auto c = realize(key, Region::box(Site::origin(d), r), Probability(p));
          if (!reference::same_partition(label_clusters(c), reference::bfs_oracle(c))) ++mismatches;
          ++trials;
        }
      }
    }
    out.push_back({"union-find vs BFS partitions", mismatches == 0,
                   std::to_string(mismatches) + " mismatches in " + std::to_string(trials)});
  }

  // Edge values.
  {
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += edge_value(SeedKey{3, 0}, Edge{Site{i % 300 - 150, i / 300 - 150}, i % 2});
    out.push_back({"edge value mean over 1e5 edges", std::abs(sum / n - 0.5) < 0.003, "mean " + show(sum / n)});
  }

  // Monotone coupling.
  {
    int violations = 0;
    const Region region = Region::box(Site::origin(3), 4);
    for (std::uint64_t s = 0; s < 10; ++s) {
      for (int k = 1; k < 9; ++k) {
        const auto a = realize(SeedKey{s, 0}, region, Probability(0.1 * k));
        const auto b = realize(SeedKey{s, 0}, region, Probability(0.1 * (k + 1)));
        if (!a.subset_of(b)) ++violations;
      }
    }
    out.push_back({"monotone coupling", violations == 0, std::to_string(violations) + " violations"});
  }

  // Parallel and serial realization agree.
  {
    const Region region = Region::box(Site::origin(3), 12);
    const auto a = realize(SeedKey{9, 4}, region, Probability(0.37));
    const auto b = realize_serial(SeedKey{9, 4}, region, Probability(0.37));
    out.push_back({"realize vs realize_serial", a.same_edges(b), region.describe()});
  }

  // Serialization round trip.
  {
    const auto triple =
        build_triple(SeedKey{5, 1}, Region::box(Site::origin(2), 6), Probability(0.6), Probability(0.2),
                     ProxyRule::boundary());
    const auto bytes = serialize(triple);
    const auto back = deserialize_triple(bytes);
    const bool ok = back.omega_p.same_edges(triple.omega_p) && back.omega_tilde_p.same_edges(triple.omega_tilde_p) &&
                    back.omega_prime_eps.same_edges(triple.omega_prime_eps) &&
                    back.omega_tilde_p_eps.same_edges(triple.omega_tilde_p_eps) && serialize(back) == bytes;
    out.push_back({"triple serialization round trip", ok, std::to_string(bytes.size()) + " bytes"});
  }

  // Enumeration oracle on the 13-edge fixture.
  {
    const auto fx = reference::enumeration_fixture();
    const Probability p(0.6);
    const double exact_E = reference::enumerate_probability(
        fx.background, fx.free_edges, p.value(),
        [&](const Configuration& c) { return reference::event_E(c, fx.x, fx.ell, fx.L); });
    const double exact_cross = reference::enumerate_probability(
        fx.background, fx.free_edges, p.value(),
        [&](const Configuration& c) { return reference::crossing_clause(c, fx.x, fx.ell, fx.L); });
    const ReplicaRange range{11, 0, 20000};
    const auto est_E = event_probability(
        [&](SeedKey k) { return event_E(reference::fixture_sample(fx, k, p), fx.x, fx.ell, fx.L).outcome; }, range);
    const auto est_cross = event_probability(
        [&](SeedKey k) {
          return event_E(reference::fixture_sample(fx, k, p), fx.x, fx.ell, fx.L).failed_clause != 1;
        },
        range);
    out.push_back(within_sigma("event E vs enumeration (13 edges)", est_E, exact_E));
    out.push_back(within_sigma("crossing clause vs enumeration", est_cross, exact_cross));
  }

  // Chain one-arm closed form.
  {
    const auto est = one_arm_estimate(Probability(0.7), 5, ReplicaRange{13, 0, 20000}, {2, ArmGeometry::chain});
    out.push_back(within_sigma("chain one-arm p=0.7 n=5", est, reference::chain_one_arm_exact(0.7, 5)));
  }

  // Power-law fit.
  {
    const std::vector<std::pair<double, double>> pts = {{2, 0.25}, {4, 1.0 / 16}, {8, 1.0 / 64}};
    const auto fit = exponent_fit(pts);
    out.push_back({"exponent fit of n^-2", std::abs(fit.slope + 2.0) < 1e-12, "slope " + show(fit.slope)});
  }

  // Good boxes against BFS.
  {
    int mismatches = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto c = realize(SeedKey{17, s}, Region::box(Site::origin(2), 8), Probability(0.7));
      if (good_box(c, Site::origin(2), 8) != reference::good_box(c, Site::origin(2), 8)) ++mismatches;
    }
    out.push_back({"good_box vs BFS (20 seeds)", mismatches == 0, std::to_string(mismatches) + " mismatches"});
  }

  // Arm counts against BFS.
  {
    int mismatches = 0;
    const Site x = Site::origin(3);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto c = realize(SeedKey{19, s}, arm_support(x, 1, 2), Probability(0.4));
      if (event_A(c, x, 1, 2, 1000).count != reference::arm_count(c, x, 1, 2)) ++mismatches;
    }
    out.push_back({"arm counts vs BFS (d=3)", mismatches == 0, std::to_string(mismatches) + " mismatches"});
  }

  return out;
}

}  // namespace sdp::app
