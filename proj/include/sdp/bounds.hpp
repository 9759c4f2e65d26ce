#pragma once

// Closed-form bound calculators from the renormalization lemmas. Pure functions.

#include <cstdint>

namespace sdp {

struct BoundParams {
  int dim = 2;
  std::int64_t ell = 1;
  std::int64_t L = 1;
  std::int64_t M = 1;
  double eps = 0.1;
  double eta = 0.1;
  double p_c_input = 0.5;  // reference value for p_c supplied by the caller
  double C = 1.0;          // one-arm constant: P_pc(0 <-> ∂B_0(n)) <= C / n^2
  double c = 1.0;          // decay rate of P(not E) <= exp(-c L)
};

// Smallest M >= 1 with 49 (2l+1)^(d-2) C / M < eta.
std::uint64_t markov_bound_M(std::int64_t ell, double C, double eta, int dim);

// (4/10)^(L/l) * (6L/l)^2
double peierls_bound(std::int64_t ell, std::int64_t L);

struct UnionBound {
  double value = 0.0;       // (1-p_c-eps)^(-2dM) (6L+1)^(dM) exp(-cL)
  double log_value = 0.0;
  std::int64_t min_L = 0;   // smallest L0 with value < eta for every L >= L0
};

// Evaluated in log space.
UnionBound union_bound_FM(const BoundParams& params);
double log_union_bound(const BoundParams& params, std::int64_t L);

}  // namespace sdp
