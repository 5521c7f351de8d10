#include "nplab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nplab/scharfetter_gummel.hpp"

namespace nplab {

namespace {

void require_state(const SimState& state, const SimParams& params) {
  if (state.conc.size() != params.species.size()) {
    throw ValidationError("state has " + std::to_string(state.conc.size()) +
                          " concentration fields but params list " +
                          std::to_string(params.species.size()) + " species");
  }
}

// Sum over interior x- and y-faces of fn(left, right, h) on the two neighbours.
template <typename Fn>
double face_sum(const Field& a, const Field& b, Fn&& fn) {
  const Grid2D& g = a.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const auto& av = a.values();
  const auto& bv = b.values();
  const double sx = fn(av.topRows(nx - 1), av.bottomRows(nx - 1), bv.topRows(nx - 1),
                       bv.bottomRows(nx - 1), g.hx());
  const double sy = fn(av.leftCols(ny - 1), av.rightCols(ny - 1), bv.leftCols(ny - 1),
                       bv.rightCols(ny - 1), g.hy());
  return (sx + sy) * g.cell_area();
}

}  // namespace

void require_nonnegative(const Field& f, const char* what) {
  if (!(f.values() >= 0.0).all()) {
    throw NegativeConcentration(std::string(what) + ": field has negative or NaN values (min " +
                                std::to_string(f.values().minCoeff()) + ")");
  }
}

double relative_entropy(const Field& g) {
  require_nonnegative(g, "relative_entropy");
  const double mean = average(g);
  if (!(mean > 0.0)) throw ValidationError("relative_entropy: field has zero average");
  if (g.is_constant()) return 0.0;
  // Bregman form mean * (x ln x - x + 1), x = g / mean; integrates to the same
  // value because int (g - mean) = 0, and every cell contributes >= 0.
  const Eigen::ArrayXXd x = g.values() / mean;
  const Eigen::ArrayXXd xm1 = x - 1.0;
  const Eigen::ArrayXXd phi = (x > 0.0).select(x * xm1.log1p() - xm1, 1.0);
  return std::max(0.0, mean * phi.sum() * g.grid().cell_area());
}

double sqrt_dirichlet(const Field& g) {
  require_nonnegative(g, "sqrt_dirichlet");
  // sqrt(b) - sqrt(a) = (b - a) / (sqrt(a) + sqrt(b)) avoids cancellation.
  return face_sum(g, g, [](const auto& l, const auto& r, const auto&, const auto&, double h) {
    const Eigen::ArrayXXd den = l.sqrt() + r.sqrt();
    const Eigen::ArrayXXd d = (den > 0.0).select((r - l) / den, 0.0);
    return d.square().sum() / (h * h);
  });
}

double power_fisher(const Field& g, int p) {
  if (p < 3) throw ValidationError("power_fisher: p must be >= 3, got " + std::to_string(p));
  if (p == 4) return sqrt_dirichlet(g);
  require_nonnegative(g, "power_fisher");
  const double a = 1.0 / (p - 2);
  // b^a - c^a = c^a expm1(a log1p((b - c) / c)) with c the smaller value.
  return face_sum(g, g, [a](const auto& l, const auto& r, const auto&, const auto&, double h) {
    const Eigen::ArrayXXd lo = l.min(r);
    const Eigen::ArrayXXd hi = l.max(r);
    const Eigen::ArrayXXd ratio = (lo > 0.0).select((hi - lo) / lo, 0.0);
    const Eigen::ArrayXXd d = (lo > 0.0).select(lo.pow(a) * (a * ratio.log1p()).expm1(), hi.pow(a));
    return d.square().sum() / (h * h);
  });
}

double total_energy(const SimState& state, const SimParams& params) {
  require_state(state, params);
  double e = 0.0;
  for (const Field& c : state.conc) e += relative_entropy(c);
  const double grad_phi = h1_seminorm(state.phi);
  return e + 0.5 * params.eps * grad_phi * grad_phi;
}

double dissipation(const SimState& state, const SimParams& params, const EntropyPolicy& policy) {
  require_state(state, params);
  std::vector<Faces> fluxes;
  for (std::size_t i = 0; i < state.conc.size(); ++i) {
    const SpeciesSpec& sp = params.species[i];
    fluxes.push_back(sg_flux(state.conc[i], state.phi, sp.z, sp.diff));
  }
  return dissipation(state, params, fluxes, policy);
}

double dissipation(const SimState& state, const SimParams& params, const std::vector<Faces>& fluxes,
                   const EntropyPolicy& policy) {
  require_state(state, params);
  if (fluxes.size() != state.conc.size()) throw ValidationError("dissipation: one flux per species expected");
  double total = 0.0;
  for (std::size_t i = 0; i < state.conc.size(); ++i) {
    const Field& c = state.conc[i];
    const SpeciesSpec& sp = params.species[i];
    const Faces& flux = fluxes[i];
    const Grid2D& g = c.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    const double floor = policy.floor;
    const double z = sp.z;
    // Jump of ln c + z phi across each face; ln(c_R / c_L) via log1p keeps
    // full accuracy near equilibrium.
    auto production = [floor, z](const auto& F, const auto& cl, const auto& cr, const auto& pl,
                                 const auto& pr) {
      const Eigen::ArrayXXd alive = ((cl > floor) && (cr > floor)).template cast<double>();
      const Eigen::ArrayXXd safe_l = cl.max(floor);
      const Eigen::ArrayXXd jump = ((cr.max(floor) - safe_l) / safe_l).log1p() + z * (pr - pl);
      return (alive > 0.0).select(F * jump, 0.0).sum();
    };
    const auto& cv = c.values();
    const auto& pv = state.phi.values();
    const double sx = production(flux.x().middleRows(1, nx - 1), cv.topRows(nx - 1), cv.bottomRows(nx - 1),
                                 pv.topRows(nx - 1), pv.bottomRows(nx - 1)) /
                      g.hx();
    const double sy = production(flux.y().middleCols(1, ny - 1), cv.leftCols(ny - 1), cv.rightCols(ny - 1),
                                 pv.leftCols(ny - 1), pv.rightCols(ny - 1)) /
                      g.hy();
    total += (sx + sy) * g.cell_area();
  }
  return total;
}

DissipationLowerParts dissipation_lower_parts(const SimState& state, const SimParams& params) {
  require_state(state, params);
  DissipationLowerParts parts{0.0, 0.0, 0.0, params.min_diffusivity()};
  for (std::size_t i = 0; i < state.conc.size(); ++i) {
    const Field& c = state.conc[i];
    const double z = params.species[i].z;
    parts.sqrt_dirichlet_sum += sqrt_dirichlet(c);
    if (z == 0.0) continue;
    // 2 z grad c . grad phi summed over faces: integrating by parts and using
    // -eps Lap phi = rho turns sum_i of this into (2/eps) int rho^2.
    parts.charge_term += face_sum(c, state.phi, [z](const auto& cl, const auto& cr, const auto& pl,
                                                    const auto& pr, double h) {
      return (2.0 * z * (cr - cl) * (pr - pl)).sum() / (h * h);
    });
    parts.drift_term += face_sum(c, state.phi, [z](const auto& cl, const auto& cr, const auto& pl,
                                                   const auto& pr, double h) {
      return (z * z * cl.min(cr) * (pr - pl).square()).sum() / (h * h);
    });
  }
  return parts;
}

double dissipation_lower(const SimState& state, const SimParams& params) {
  return dissipation_lower_parts(state, params).total();
}

CkpSides ckp_check(const Field& c) { return ckp_check(c, relative_entropy(c)); }

CkpSides ckp_check(const Field& c, double re) {
  const double mean = average(c);
  const double l1 = (c.values() - mean).abs().sum() * c.grid().cell_area();
  return {l1 * l1, 2.0 * c.grid().area() * mean * re};
}

}  // namespace nplab
