#pragma once

#include <cstdint>

#include "bridgelab/generator.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/random.hpp"
#include "bridgelab/types.hpp"

namespace testutil {

// ell = beta0 = alpha = alpha0 = k = 1, gamma = gamma0 = 0.5, xi = ell/3
inline bridgelab::ModelParams standard_params() {
  return bridgelab::ModelParams::with_ratio(1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5, 1, 3);
}

// Random modal data with a 1/(1+j)^2 falloff so truncation tails are small.
inline bridgelab::Vector decaying_state(int n, std::uint64_t seed) {
  bridgelab::Rng rng(seed);
  bridgelab::Vector u(4 * n);
  for (int slot = 0; slot < 4; ++slot)
    for (int j = 0; j < n; ++j)
      u[slot * n + j] = rng.normal() / ((1.0 + j) * (1.0 + j));
  return u;
}

}  // namespace testutil
