#pragma once

#include <functional>
#include <vector>

#include "nplab/functionals.hpp"
#include "nplab/model.hpp"
#include "nplab/poisson.hpp"

namespace nplab {

/// Explicit finite-volume integrator for the Nernst-Planck-Poisson system
///
///   d c_i / dt = D_i div(grad c_i + z_i c_i grad phi),  -eps Lap phi = sum_i z_i c_i,
///
/// with zero-flux boundaries. Each step takes one explicit Euler update with
/// Scharfetter-Gummel face fluxes and then re-solves the potential, so the
/// state is always self-consistent. Mass is conserved to roundoff because
/// fluxes telescope; positivity holds while dt satisfies the CFL bound.
class Simulator {
 public:
  using Observer = std::function<void(const SimState&)>;

  Simulator(const Grid2D& grid, SimParams params);

  const Grid2D& grid() const noexcept { return grid_; }
  const SimParams& params() const noexcept { return params_; }

  /// Validates nonnegativity and sum_i z_i int c_i = 0, then solves for phi.
  SimState init_state(std::vector<Field> initial) const;

  /// Hard positivity bound h_min^2 / (4 max_i D_i max_faces B(-|s|)).
  double cfl_bound(const SimState& state) const;

  /// params.dt when positive, otherwise cfl_safety * cfl_bound(state).
  double resolve_dt(const SimState& state) const;

  SimState step(const SimState& state, double dt) const;

  DiagnosticsRecord diagnose(const SimState& state) const;

  /// Integrates to t_end with a uniform step. `observer`, when set, sees
  /// every state including the initial one.
  std::vector<DiagnosticsRecord> run(std::vector<Field> initial,
                                     const Observer& observer = {}) const;

 private:
  std::vector<Faces> fluxes(const SimState& state) const;
  SimState advance(const SimState& state, const std::vector<Faces>& flux, double dt) const;
  DiagnosticsRecord diagnose(const SimState& state, const std::vector<Faces>& flux) const;

  Grid2D grid_;
  SimParams params_;
  PoissonSolver poisson_;
};

SimState init_state(const SimParams& params, std::vector<Field> initial);
SimState step(const SimState& state, const SimParams& params);
std::vector<DiagnosticsRecord> run(const SimParams& params, std::vector<Field> initial);

struct DecayFit {
  double r_hat;
  double fit_residual;  ///< RMS deviation of ln E from the fitted line
  double slope;         ///< = -r_hat
  int used;             ///< number of records in the fit window
};

/// Least-squares fit of ln E against t over the leading records with
/// E > floor_ratio * E(0). Throws InsufficientData for fewer than 10 records.
DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records, double floor_ratio = 1e-14);

/// max_n |(E_{n+1} - E_n) / dt_n + (D_n + D_{n+1}) / 2|.
double energy_identity_residual(const std::vector<DiagnosticsRecord>& records);

}  // namespace nplab
