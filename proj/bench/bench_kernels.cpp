// Parallel kernels against their serial references: wall time and agreement.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "sdp/clustering.hpp"
#include "sdp/estimators.hpp"
#include "sdp/realize.hpp"

using namespace sdp;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-34s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel, agree ? "agree" : "DIFFER");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  for (const auto& [d, r] : {std::pair{3, 40}, std::pair{7, 4}}) {
    const Region region = Region::box(Site::origin(d), r);
    const SeedKey key{1, 0};
    Configuration a(region), b(region);
    const double ts = best_of(3, [&] { a = realize_serial(key, region, Probability(0.3)); });
    const double tp = best_of(3, [&] { b = realize(key, region, Probability(0.3)); });
    char name[64];
    std::snprintf(name, sizeof name, "realize d=%d B_0(%d)", d, r);
    row(name, ts, tp, a.same_edges(b));
  }

  {
    const Trial trial = [](SeedKey k) {
      const auto c = realize_serial(k, Region::box(Site::origin(2), 12), Probability(0.5));
      return origin_reaches_boundary(c, 12);
    };
    const ReplicaRange range{2, 0, 4000};
    Estimate es, ep;
    const double ts = best_of(3, [&] { es = event_probability_serial(trial, range); });
    const double tp = best_of(3, [&] { ep = event_probability(trial, range); });
    row("event_probability one-arm n=12", ts, tp, es.successes == ep.successes);
  }
  return 0;
}
