#include "sdp/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sdp/errors.hpp"
#include "sdp/geometry.hpp"

namespace sdp {

std::uint64_t markov_bound_M(std::int64_t ell, double C, double eta, int dim) {
  check_dimension(dim);
  if (ell < 0) throw ConfigError("markov_bound_M: ell must be >= 0");
  if (!(C > 0.0) || !(eta > 0.0)) throw ConfigError("markov_bound_M: C and eta must be positive");

  // K = 49 (2l+1)^(d-2), exact while it fits in 64 bits.
  const auto base = static_cast<std::uint64_t>(2 * ell + 1);
  std::uint64_t K = 49;
  bool exact = true;
  for (int i = 0; i < dim - 2 && exact; ++i) {
    if (K > std::numeric_limits<std::uint64_t>::max() / base) {
      exact = false;
    } else {
      K *= base;
    }
  }
  long double threshold;
  if (exact) {
    threshold = static_cast<long double>(K) * static_cast<long double>(C) / static_cast<long double>(eta);
  } else {
    threshold = std::exp(std::log(49.0L) + (dim - 2) * std::log(static_cast<long double>(base)) +
                         std::log(static_cast<long double>(C)) - std::log(static_cast<long double>(eta)));
  }
  if (!(threshold < 1.8e19L)) throw ExtentError("markov_bound_M: result does not fit in 64 bits");

  // Smallest integer M with K C / M < eta, i.e. M > threshold; then correct
  // for rounding by testing the inequality directly.
  auto M = static_cast<std::uint64_t>(std::floor(threshold)) + 1;
  const long double KC = exact ? static_cast<long double>(K) * static_cast<long double>(C) : threshold * eta;
  // C and eta usually arrive as decimals with no exact binary value, so a
  // ratio within 1e-12 of eta counts as equal, not below.
  auto holds = [&](std::uint64_t m) {
    return KC / static_cast<long double>(m) < static_cast<long double>(eta) * (1.0L - 1e-12L);
  };
  while (M > 1 && holds(M - 1)) --M;
  while (!holds(M)) ++M;
  return M;
}

double peierls_bound(std::int64_t ell, std::int64_t L) {
  if (ell < 1) throw ConfigError("peierls_bound: ell must be >= 1");
  if (L < ell) throw ConfigError("peierls_bound: L must be >= ell");
  const double ratio = static_cast<double>(L) / static_cast<double>(ell);
  return std::pow(0.4, ratio) * (6.0 * ratio) * (6.0 * ratio);
}

double log_union_bound(const BoundParams& p, std::int64_t L) {
  const double dm = static_cast<double>(p.dim) * static_cast<double>(p.M);
  return -2.0 * dm * std::log1p(-(p.p_c_input + p.eps)) + dm * std::log(6.0 * static_cast<double>(L) + 1.0) -
         p.c * static_cast<double>(L);
}

UnionBound union_bound_FM(const BoundParams& p) {
  check_dimension(p.dim);
  if (!(p.p_c_input + p.eps < 1.0)) throw ConfigError("union_bound_FM: p_c + eps must be < 1");
  if (!(p.c > 0.0)) throw ConfigError("union_bound_FM: c must be positive");
  if (!(p.eta > 0.0)) throw ConfigError("union_bound_FM: eta must be positive");
  if (p.M < 0 || p.L < 0) throw ConfigError("union_bound_FM: L and M must be non-negative");

  UnionBound out;
  out.log_value = log_union_bound(p, p.L);
  out.value = std::exp(out.log_value);

  // g(L) = log bound is concave: increasing up to L* = dM/c - 1/6, then decreasing.
  const double log_eta = std::log(p.eta);
  const double dm = static_cast<double>(p.dim) * static_cast<double>(p.M);
  const double peak = dm / p.c - 1.0 / 6.0;
  auto g = [&](std::int64_t L) { return log_union_bound(p, L); };
  const auto lo_peak = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(peak)));
  const auto hi_peak = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(peak)));
  if (std::max(g(lo_peak), g(hi_peak)) < log_eta) {
    out.min_L = 1;
    return out;
  }
  if (g(hi_peak) < log_eta) {
    out.min_L = hi_peak;
    return out;
  }
  // Bisection on the decreasing branch [hi_peak, hi].
  std::int64_t lo = hi_peak;
  std::int64_t hi = std::max<std::int64_t>(hi_peak, 1) * 2;
  while (g(hi) >= log_eta) {
    lo = hi;
    hi *= 2;
    if (hi > (std::int64_t{1} << 60)) throw ExtentError("union_bound_FM: no L below 2^60 satisfies the bound");
  }
  // Invariant: g(lo) >= log_eta > g(hi).
  while (hi - lo > 1) {
    const auto mid = lo + (hi - lo) / 2;
    if (g(mid) < log_eta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.min_L = hi;
  return out;
}

}  // namespace sdp
