#include "nplab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nplab/scharfetter_gummel.hpp"

namespace nplab {

void SimParams::validate() const {
  if (species.size() < 2) throw ValidationError("SimParams: need at least two species");
  bool pos = false;
  bool neg = false;
  for (const SpeciesSpec& s : species) {
    if (!(s.diff > 0.0) || !std::isfinite(s.diff)) {
      throw ValidationError("SimParams: species '" + s.label + "' needs diffusivity > 0");
    }
    pos = pos || s.z > 0;
    neg = neg || s.z < 0;
  }
  if (!pos || !neg) {
    throw ValidationError("SimParams: electroneutrality needs both positive and negative valences");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("SimParams: eps must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("SimParams: t_end must be > 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw ValidationError("SimParams: cfl_safety must lie in (0, 1]");
  }
  if (!std::isfinite(dt)) throw ValidationError("SimParams: dt must be finite");
  if (record_stride < 1) throw ValidationError("SimParams: record_stride must be >= 1");
  poisson_config().validate();
}

double SimParams::min_diffusivity() const {
  double d = species.empty() ? 0.0 : species.front().diff;
  for (const SpeciesSpec& s : species) d = std::min(d, s.diff);
  return d;
}

double SimParams::max_diffusivity() const {
  double d = 0.0;
  for (const SpeciesSpec& s : species) d = std::max(d, s.diff);
  return d;
}

PoissonConfig SimParams::poisson_config() const {
  PoissonConfig cfg = poisson;
  cfg.eps = eps;
  return cfg;
}

Field charge_density(const std::vector<Field>& conc, const std::vector<SpeciesSpec>& species) {
  if (conc.empty() || conc.size() != species.size()) {
    throw ValidationError("charge_density: concentration and species counts differ");
  }
  Field rho(conc.front().grid(), 0.0);
  for (std::size_t i = 0; i < conc.size(); ++i) {
    detail::require_same_grid(rho.grid(), conc[i].grid(), "charge_density");
    if (species[i].z != 0) rho.values() += species[i].z * conc[i].values();
  }
  return rho;
}

Simulator::Simulator(const Grid2D& grid, SimParams params)
    : grid_(grid), params_(std::move(params)), poisson_(grid, (params_.validate(), params_.poisson_config())) {}

SimState Simulator::init_state(std::vector<Field> initial) const {
  if (initial.size() != params_.species.size()) {
    throw ValidationError("init_state: expected " + std::to_string(params_.species.size()) +
                          " initial fields, got " + std::to_string(initial.size()));
  }
  double net = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    detail::require_same_grid(grid_, initial[i].grid(), "init_state");
    require_nonnegative(initial[i], ("init_state: species " + std::to_string(i + 1)).c_str());
    const double m = integrate(initial[i]);
    net += params_.species[i].z * m;
    total += std::abs(params_.species[i].z) * m;
  }
  if (std::abs(net) > 1e-10 * std::max(total, std::numeric_limits<double>::min())) {
    std::ostringstream msg;
    msg << "init_state: initial data is not electroneutral (sum_i z_i int c_i = " << net << ")";
    throw ElectroneutralityViolated(msg.str());
  }
  Field rho = charge_density(initial, params_.species);
  Field phi = poisson_.solve(rho, total);
  return SimState{0.0, std::move(initial), std::move(phi), std::move(rho)};
}

double Simulator::cfl_bound(const SimState& state) const {
  double bmax = 1.0;
  for (const SpeciesSpec& s : params_.species) bmax = std::max(bmax, max_bernoulli(state.phi, s.z));
  const double h = grid_.h_min();
  return h * h / (4.0 * params_.max_diffusivity() * bmax);
}

double Simulator::resolve_dt(const SimState& state) const {
  return params_.dt > 0.0 ? params_.dt : params_.cfl_safety * cfl_bound(state);
}

std::vector<Faces> Simulator::fluxes(const SimState& state) const {
  std::vector<Faces> out;
  out.reserve(state.conc.size());
  for (std::size_t i = 0; i < state.conc.size(); ++i) {
    const SpeciesSpec& sp = params_.species[i];
    out.push_back(sg_flux(state.conc[i], state.phi, sp.z, sp.diff));
  }
  return out;
}

SimState Simulator::step(const SimState& state, double dt) const {
  return advance(state, fluxes(state), dt);
}

SimState Simulator::advance(const SimState& state, const std::vector<Faces>& flux, double dt) const {
  const double bound = cfl_bound(state);
  if (!(dt > 0.0) || dt > bound) {
    std::ostringstream msg;
    msg << "step: dt = " << dt << " violates the positivity bound " << bound << " at t = " << state.t;
    throw CflViolation(msg.str());
  }
  SimState next{state.t + dt, {}, Field(grid_), Field(grid_)};
  next.conc.reserve(state.conc.size());
  double total = 0.0;
  for (std::size_t i = 0; i < state.conc.size(); ++i) {
    next.conc.emplace_back(grid_, state.conc[i].values() + dt * divergence(flux[i]).values());
    total += std::abs(params_.species[i].z) * integrate(next.conc.back());
  }
  next.rho = charge_density(next.conc, params_.species);
  next.phi = poisson_.solve(next.rho, total);
  return next;
}

DiagnosticsRecord Simulator::diagnose(const SimState& state) const {
  return diagnose(state, fluxes(state));
}

DiagnosticsRecord Simulator::diagnose(const SimState& state, const std::vector<Faces>& flux) const {
  DiagnosticsRecord rec;
  rec.t = state.t;
  std::vector<double> entropy;
  for (const Field& c : state.conc) entropy.push_back(relative_entropy(c));
  const double grad_phi = h1_seminorm(state.phi);
  // Summed in the same order as total_energy.
  rec.energy = 0.0;
  for (double e : entropy) rec.energy += e;
  rec.energy += 0.5 * params_.eps * grad_phi * grad_phi;
  rec.dissipation = dissipation(state, params_, flux);
  rec.dissipation_lower = dissipation_lower(state, params_);
  rec.net_charge = integrate(state.rho);
  rec.min_conc = std::numeric_limits<double>::infinity();
  rec.ckp_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.conc.size(); ++i) {
    const Field& c = state.conc[i];
    const double mean = average(c);
    rec.mass.push_back(integrate(c));
    rec.l1_dist.push_back((c.values() - mean).abs().sum() * grid_.cell_area());
    rec.min_conc = std::min(rec.min_conc, c.min());
    const CkpSides ckp = ckp_check(c, entropy[i]);
    rec.ckp_violation = std::max(rec.ckp_violation, ckp.lhs - ckp.rhs);
  }
  return rec;
}

std::vector<DiagnosticsRecord> Simulator::run(std::vector<Field> initial,
                                              const Observer& observer) const {
  SimState state = init_state(std::move(initial));
  // Uniform grid in time ending at t_end: the step is shortened to t_end / n
  // (the tolerance keeps t_end/dt = integer from adding a step).
  const double dt_max = resolve_dt(state);
  const auto steps = static_cast<long>(std::ceil(params_.t_end / dt_max * (1.0 - 1e-12)));
  const double dt = params_.t_end / static_cast<double>(steps);
  std::vector<DiagnosticsRecord> records;
  records.reserve(static_cast<std::size_t>(steps / params_.record_stride + 2));
  if (observer) observer(state);
  std::vector<Faces> flux = fluxes(state);
  records.push_back(diagnose(state, flux));
  for (long n = 1; n <= steps; ++n) {
    state = advance(state, flux, dt);
    state.t = n == steps ? params_.t_end : static_cast<double>(n) * dt;
    flux = fluxes(state);
    if (observer) observer(state);
    if (n % params_.record_stride == 0 || n == steps) records.push_back(diagnose(state, flux));
  }
  return records;
}

SimState init_state(const SimParams& params, std::vector<Field> initial) {
  if (initial.empty()) throw ValidationError("init_state: no initial fields");
  const Grid2D grid = initial.front().grid();
  return Simulator(grid, params).init_state(std::move(initial));
}

SimState step(const SimState& state, const SimParams& params) {
  if (state.conc.empty()) throw ValidationError("step: empty state");
  const Simulator sim(state.conc.front().grid(), params);
  return sim.step(state, sim.resolve_dt(state));
}

std::vector<DiagnosticsRecord> run(const SimParams& params, std::vector<Field> initial) {
  if (initial.empty()) throw ValidationError("run: no initial fields");
  const Grid2D grid = initial.front().grid();
  return Simulator(grid, params).run(std::move(initial));
}

DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records, double floor_ratio) {
  if (records.empty() || !(records.front().energy > 0.0)) {
    throw InsufficientData("fit_decay_rate: initial energy is zero");
  }
  const double cutoff = floor_ratio * records.front().energy;
  std::vector<double> t;
  std::vector<double> y;
  for (const DiagnosticsRecord& r : records) {
    if (!(r.energy > 0.0) || !(r.energy > cutoff)) break;
    t.push_back(r.t);
    y.push_back(std::log(r.energy));
  }
  if (t.size() < 10) {
    throw InsufficientData("fit_decay_rate: only " + std::to_string(t.size()) +
                           " records above the energy floor (need 10)");
  }
  const double n = static_cast<double>(t.size());
  double tm = 0.0;
  double ym = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    tm += t[k];
    ym += y[k];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    stt += (t[k] - tm) * (t[k] - tm);
    sty += (t[k] - tm) * (y[k] - ym);
  }
  if (!(stt > 0.0)) throw InsufficientData("fit_decay_rate: records share one time");
  const double slope = sty / stt;
  const double icpt = ym - slope * tm;
  double ss = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double d = y[k] - (icpt + slope * t[k]);
    ss += d * d;
  }
  return {-slope, std::sqrt(ss / n), slope, static_cast<int>(t.size())};
}

double energy_identity_residual(const std::vector<DiagnosticsRecord>& records) {
  if (records.size() < 2) throw InsufficientData("energy_identity_residual: need >= 2 records");
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < records.size(); ++n) {
    const double dt = records[n + 1].t - records[n].t;
    if (!(dt > 0.0)) throw ValidationError("energy_identity_residual: records not increasing in t");
    const double rate = (records[n + 1].energy - records[n].energy) / dt;
    const double mid = 0.5 * (records[n].dissipation + records[n + 1].dissipation);
    worst = std::max(worst, std::abs(rate + mid));
  }
  return worst;
}

}  // namespace nplab
