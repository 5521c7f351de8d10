#pragma once

#include <string>
#include <vector>

#include "nplab/field.hpp"
#include "nplab/poisson.hpp"

namespace nplab {

struct SpeciesSpec {
  int z = 0;          ///< valence, may be negative
  double diff = 1.0;  ///< diffusivity D_i > 0
  std::string label;

  friend bool operator==(const SpeciesSpec&, const SpeciesSpec&) = default;
};

struct SimParams {
  std::vector<SpeciesSpec> species;
  double eps = 1.0;
  /// Time step; <= 0 selects cfl_safety times the positivity bound at t = 0.
  double dt = 0.0;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  /// Emit a record every `record_stride` steps (the last step is always recorded).
  int record_stride = 1;
  PoissonConfig poisson{.method = PoissonMethod::Spectral};

  void validate() const;
  double min_diffusivity() const;
  double max_diffusivity() const;
  /// Poisson settings with `eps` taken from the model.
  PoissonConfig poisson_config() const;
};

struct SimState {
  double t = 0.0;
  std::vector<Field> conc;
  Field phi;
  Field rho;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double dissipation_lower = 0.0;
  std::vector<double> mass;
  double net_charge = 0.0;
  std::vector<double> l1_dist;
  double min_conc = 0.0;
  /// max_i of lhs - rhs in the CKP inequality (<= 0 when it holds).
  double ckp_violation = 0.0;
};

/// rho = sum_i z_i c_i.
Field charge_density(const std::vector<Field>& conc, const std::vector<SpeciesSpec>& species);

}  // namespace nplab
