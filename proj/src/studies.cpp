#include "nplab/studies.hpp"

#include <cmath>
#include <numbers>

#include "nplab/poisson.hpp"
#include "nplab/simulator.hpp"

namespace nplab {

namespace {

void add_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    rows[k].order = std::log2(rows[k - 1].error / rows[k].error);
  }
}

}  // namespace

std::vector<ConvergenceRow> poisson_convergence(int levels, int base, PoissonMethod method) {
  if (levels < 1) throw ValidationError("poisson_convergence: levels must be >= 1");
  constexpr double kPi = std::numbers::pi;
  std::vector<ConvergenceRow> rows;
  for (int k = 0; k < levels; ++k) {
    const int n = base << k;
    const Grid2D g(n, n);
    const Field rho = Field::sample(g, [](double x, double) { return std::cos(kPi * x); });
    const Field exact =
        Field::sample(g, [](double x, double) { return std::cos(kPi * x) / (kPi * kPi); });
    PoissonConfig cfg;
    cfg.method = method;
    cfg.tol = 1e-12;
    const Field phi = solve_poisson(rho, cfg);
    const double err = lp_norm(Field(g, phi.values() - exact.values()), 2.0);
    rows.push_back({g.hx(), err, std::nullopt});
  }
  add_orders(rows);
  return rows;
}

std::vector<ConvergenceRow> energy_identity_convergence(int levels, double t_end, int n) {
  if (levels < 1) throw ValidationError("energy_identity_convergence: levels must be >= 1");
  RunConfig cfg = reference_config();
  cfg.nx = n;
  cfg.ny = n;
  cfg.t_end = t_end;
  cfg.finalize();
  const Grid2D grid = cfg.grid();

  // Fix dt0 from the initial state so every level shares one time grid.
  SimParams params = cfg.sim_params();
  const Simulator probe(grid, params);
  const double dt0 = probe.resolve_dt(probe.init_state(cfg.initial_fields()));

  std::vector<ConvergenceRow> rows;
  for (int k = 0; k < levels; ++k) {
    params.dt = dt0 / static_cast<double>(1 << k);
    const Simulator sim(grid, params);
    const auto records = sim.run(cfg.initial_fields());
    rows.push_back({params.dt, energy_identity_residual(records), std::nullopt});
  }
  add_orders(rows);
  return rows;
}

RunConfig reference_config(double eps) {
  RunConfig c;
  c.nx = 64;
  c.ny = 64;
  c.species = {{1, 1.0, "cation"}, {-1, 1.0, "anion"}};
  c.eps = eps;
  c.dt = 0.0;
  c.t_end = 2.0;
  c.initial.preset = "two-species-cosine";
  c.initial.amplitude = 0.1;
  c.finalize();
  return c;
}

}  // namespace nplab
