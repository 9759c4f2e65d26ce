#pragma once

// Edge-field realization kernels. `realize` is OpenMP-parallel over blocks of
// sites; `realize_serial` is the straight-line reference kept for tests and the
// benchmark. Both produce bit-identical configurations.

#include "sdp/configuration.hpp"

namespace sdp {

// openness(e) = [edge_label(key, e) < threshold(p)]
Configuration realize(SeedKey key, const Region& region, Probability p, Layer layer = Layer::omega_p);
Configuration realize_serial(SeedKey key, const Region& region, Probability p, Layer layer = Layer::omega_p);

// omega'_eps: drawn from recovery_key(key).
Configuration realize_recovery_noise(SeedKey key, const Region& region, Probability eps);

}  // namespace sdp
