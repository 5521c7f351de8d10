#pragma once

#include <optional>
#include <vector>

#include "nplab/config.hpp"
#include "nplab/model.hpp"

namespace nplab {

struct ConvergenceRow {
  double step;   ///< h for spatial studies, dt for temporal ones
  double error;
  std::optional<double> order;  ///< log2(error_prev / error), absent on the first row
};

/// L2 error of the discrete solution of -Lap phi = cos(pi x) against
/// cos(pi x) / pi^2 on base^2, (2 base)^2, ... grids.
std::vector<ConvergenceRow> poisson_convergence(int levels, int base = 32,
                                                PoissonMethod method = PoissonMethod::ConjugateGradient);

/// max_n |dE/dt + D| on the two-species cosine problem (64^2, eps = 1) with
/// dt halved per level starting from the automatic CFL step.
std::vector<ConvergenceRow> energy_identity_convergence(int levels, double t_end = 0.01, int n = 64);

/// The standard two-species test: z = +-1, D = 1, unit square, 64^2,
/// c_1 = 1 + 0.1 cos(pi x), c_2 = 1 + 0.1 cos(pi y), automatic dt, t_end = 2.
RunConfig reference_config(double eps = 1.0);

}  // namespace nplab
