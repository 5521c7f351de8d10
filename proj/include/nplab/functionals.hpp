#pragma once

#include "nplab/field.hpp"
#include "nplab/model.hpp"

namespace nplab {

/// Treatment of the singular integrands c ln c and |grad c|^2 / c at c = 0.
struct EntropyPolicy {
  /// Faces touching a cell with c <= floor contribute nothing to the dissipation.
  double floor = 1e-300;
};

/// Throws NegativeConcentration naming `what` if any value is < 0 or NaN.
void require_nonnegative(const Field& f, const char* what);

/// int g ln(g / mean g) with 0 ln 0 = 0. Requires g >= 0 and mean g > 0.
double relative_entropy(const Field& g);

/// ||grad sqrt(g)||_2^2.
double sqrt_dirichlet(const Field& g);

/// ||grad g^(1/(p-2))||_2^2 for integer p >= 3; p = 4 is sqrt_dirichlet.
double power_fisher(const Field& g, int p);

/// sum_i relative_entropy(c_i) + (eps/2) ||grad phi||^2.
double total_energy(const SimState& state, const SimParams& params);

/// Discrete entropy production of the Scharfetter-Gummel scheme,
///   sum_i sum_faces F_i . grad(ln c_i + z_i phi) |face|,
/// the discrete form of sum_i D_i int c_i |grad(ln c_i + z_i phi)|^2.
double dissipation(const SimState& state, const SimParams& params,
                   const EntropyPolicy& policy = {});

/// Same, reusing fluxes[i] = sg_flux(c_i, phi, z_i, D_i) already computed for the state.
double dissipation(const SimState& state, const SimParams& params, const std::vector<Faces>& fluxes,
                   const EntropyPolicy& policy = {});

struct DissipationLowerParts {
  double sqrt_dirichlet_sum;  ///< sum_i ||grad sqrt c_i||^2
  double charge_term;         ///< (2/eps) int rho^2, via sum_i 2 z_i <grad c_i, grad phi>
  double drift_term;          ///< sum_i z_i^2 int c_i |grad phi|^2
  double d_min;
  double total() const { return d_min * (4.0 * sqrt_dirichlet_sum + charge_term + drift_term); }
};

DissipationLowerParts dissipation_lower_parts(const SimState& state, const SimParams& params);

/// D_min (4 sum_i ||grad sqrt c_i||^2 + (2/eps) int rho^2 + sum_i z_i^2 int c_i |grad phi|^2).
double dissipation_lower(const SimState& state, const SimParams& params);

struct CkpSides {
  double lhs;  ///< ||c - mean c||_1^2
  double rhs;  ///< 2 |Omega| mean(c) relative_entropy(c)
};

CkpSides ckp_check(const Field& c);

/// Same, with relative_entropy(c) supplied by the caller.
CkpSides ckp_check(const Field& c, double entropy);

}  // namespace nplab
