#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nplab/field.hpp"
#include "nplab/model.hpp"

namespace nplab {

/// Per-species initial profile mean + amplitude cos(kx pi x / lx) cos(ky pi y / ly).
struct ModeSpec {
  double mean = 1.0;
  double amplitude = 0.0;
  int kx = 0;
  int ky = 0;

  friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

struct InitialSpec {
  /// equilibrium | two-species-cosine | four-species-mixed | random-pair | custom
  std::string preset = "two-species-cosine";
  double amplitude = 0.1;
  /// Used by the custom preset, one entry per species.
  std::vector<ModeSpec> modes;

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

/// Simulation run description, stored as line-oriented `key = value` text:
///
///     grid.nx = 64
///     species.1.z = 1
///     species.1.diff = 1
///     time.dt = auto
///     initial.preset = two-species-cosine
///
/// `#` starts a comment. Unknown keys are rejected. `emit()` writes every key
/// with 17 significant digits so `parse(emit(c)) == c`.
struct RunConfig {
  int nx = 64;
  int ny = 64;
  double lx = 1.0;
  double ly = 1.0;
  std::vector<SpeciesSpec> species;
  double eps = 1.0;
  double dt = 0.0;  ///< 0 = auto (CFL)
  double t_end = 2.0;
  double cfl_safety = 0.5;
  int record_stride = 1;
  double poisson_tol = 1e-10;
  PoissonMethod poisson_method = PoissonMethod::Spectral;
  InitialSpec initial;
  std::string records_path = "records.csv";
  std::string summary_path = "summary.json";
  std::uint64_t seed = 0;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
  std::string emit() const;

  /// Fills in preset species when none are listed, then checks every
  /// SimParams invariant. Throws ValidationError.
  void finalize();

  Grid2D grid() const;
  SimParams sim_params() const;
  std::vector<Field> initial_fields() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Shortest-exact formatting: 17 significant digits.
std::string format_double(double v);

}  // namespace nplab
