// Finite-difference verification of the constitutive stresses and tangents.
#pragma once

#include "gpc/materials.hpp"

#include <cstdint>

namespace gpc {

/// Largest relative errors |analytic - fd| / |analytic| over the sampled
/// states, by quantity.
struct TangentCheck {
  int samples = 0;
  double P = 0.0;       // dW/dF
  double S_m = 0.0;     // dW/dchi
  double mu = 0.0;      // dW/dgrad chi
  double d_uu = 0.0;    // dP/dF
  double d_uchi = 0.0;  // dP/dchi
  double d_chichi = 0.0;  // dS_m/dchi and dmu/dgrad chi
  double worst() const;
};

/// Random admissible states: det F in [0.5, 1.5], chi near Cof F, random
/// gradients. Central differences: step 1e-6 relative in F, 1e-3 relative in
/// chi and 1 in grad chi (W is quadratic in both, so those are exact).
TangentCheck check_tangent(const MaterialParams& params, int samples, std::uint64_t seed);

}  // namespace gpc
