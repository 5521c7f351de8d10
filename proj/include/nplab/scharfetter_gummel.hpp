#pragma once

#include <Eigen/Core>

#include <cmath>

#include "nplab/field.hpp"

namespace nplab {

/// B(x) = x / (e^x - 1), B(0) = 1. Below |x| = 1e-2 the even Taylor series
/// through x^6 is used (truncation below 1e-21 relative).
inline double bernoulli(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return 1.0 - x / 2.0 + x2 * (1.0 / 12.0 - x2 * (1.0 / 720.0 - x2 / 30240.0));
  }
  return x / std::expm1(x);
}

/// Scharfetter-Gummel face fluxes for D (grad c + z c grad phi):
///   F = (D/h) [B(-s) c_R - B(s) c_L],  s = z (phi_R - phi_L),
/// with (L, R) the lower/upper neighbours of the face in its direction.
/// Evaluated as (D/h) [B(|s|) (c_R - c_L) + s c_up] with c_up the upwind value.
/// F vanishes when ln c + z phi is constant across the face and reduces to
/// central differencing for small s. Boundary faces stay 0 (zero flux).
Faces sg_flux(const Field& c, const Field& phi, int z, double diff);

/// max over interior faces of max(B(s), B(-s)) = B(-|s|) for valence z.
double max_bernoulli(const Field& phi, int z);

}  // namespace nplab
