#pragma once

#include <Eigen/Core>

#include <limits>

#include "nplab/field.hpp"

namespace nplab {

enum class PoissonMethod {
  ConjugateGradient,  ///< CG restricted to the mean-zero subspace
  Spectral,           ///< exact diagonalisation by the cosine (DCT-II) basis
};

struct PoissonConfig {
  double eps = 1.0;
  /// Relative residual ||-eps Lap(phi) - rho_c||_2 <= tol ||rho||_2.
  double tol = 1e-10;
  /// 0 means 10 * nx * ny.
  int max_iter = 0;
  /// Compatibility: |int rho| <= neutrality_tol * max(||rho||_1, charge_scale).
  double neutrality_tol = 1e-10;
  PoissonMethod method = PoissonMethod::ConjugateGradient;

  void validate() const;
};

/// Solves -eps Lap(phi) = rho with homogeneous Neumann data and the gauge
/// mean(phi) = 0. The spectral basis is built once per solver; the solver
/// holds no mutable state so concurrent `solve` calls are safe.
class PoissonSolver {
 public:
  PoissonSolver(const Grid2D& grid, PoissonConfig cfg);

  const Grid2D& grid() const noexcept { return grid_; }
  const PoissonConfig& config() const noexcept { return cfg_; }

  /// `charge_scale` is a reference size for the compatibility test, e.g.
  /// sum_i |z_i| int c_i when rho is a near-cancelling sum of species.
  Field solve(const Field& rho, double charge_scale = 0.0) const;

  /// Relative residual of `phi` against `rho` in the solver's norm.
  double residual(const Field& phi, const Field& rho) const;

  /// Throws NonNeutralCharge when rho is incompatible with Neumann data.
  void check_compatible(const Field& rho, double charge_scale = 0.0) const;

 private:
  Field solve_cg(const Field& rho_c, double rho_norm) const;
  Field solve_spectral(const Field& rho_c) const;

  Grid2D grid_;
  PoissonConfig cfg_;
  Eigen::MatrixXd basis_x_;
  Eigen::MatrixXd basis_y_;
  Eigen::ArrayXXd inv_symbol_;  // 1 / (eps (lambda_x + lambda_y)); 0 on the constant mode
};

Field solve_poisson(const Field& rho, const PoissonConfig& cfg);

struct EllipticEstimate {
  double lhs;       ///< (2/eps) int rho^2
  double rhs_core;  ///< eps int |grad phi|^2
  double ratio;     ///< lhs / rhs_core, +inf when rhs_core == 0
};

EllipticEstimate elliptic_estimate_check(const Field& rho, const Field& phi,
                                         const PoissonConfig& cfg);

}  // namespace nplab
