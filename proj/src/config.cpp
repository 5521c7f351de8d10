#include "nplab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "nplab/corpus.hpp"

namespace nplab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ValidationError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    fail(line, "'" + key + "' expects a finite number, got '" + v + "'");
  }
  return out;
}

long long to_int(const std::string& v, int line, const std::string& key) {
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(line, "'" + key + "' expects an integer, got '" + v + "'");
  return out;
}

// "species.3.z" -> (3, "z"); index is 1-based.
bool split_indexed(const std::string& key, const std::string& prefix, std::size_t& index,
                   std::string& field, int line) {
  if (key.rfind(prefix + ".", 0) != 0) return false;
  const std::string rest = key.substr(prefix.size() + 1);
  const auto dot = rest.find('.');
  if (dot == std::string::npos) return false;
  const std::string idx = rest.substr(0, dot);
  if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos) return false;
  const long long n = to_int(idx, line, key);
  if (n < 1 || n > 64) fail(line, "index in '" + key + "' must lie in 1..64");
  index = static_cast<std::size_t>(n - 1);
  field = rest.substr(dot + 1);
  return true;
}

std::string method_name(PoissonMethod m) {
  return m == PoissonMethod::Spectral ? "spectral" : "cg";
}

Field mode_field(const Grid2D& g, const ModeSpec& m) {
  return Field::sample(g, [&](double x, double y) {
    return m.mean + m.amplitude * std::cos(m.kx * kPi * x / g.lx()) * std::cos(m.ky * kPi * y / g.ly());
  });
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (val.empty()) fail(line, "empty value for '" + key + "'");
    if (seen.count(key)) fail(line, "duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = line;

    std::size_t idx = 0;
    std::string field;
    if (key == "grid.nx") {
      c.nx = static_cast<int>(to_int(val, line, key));
    } else if (key == "grid.ny") {
      c.ny = static_cast<int>(to_int(val, line, key));
    } else if (key == "grid.lx") {
      c.lx = to_double(val, line, key);
    } else if (key == "grid.ly") {
      c.ly = to_double(val, line, key);
    } else if (key == "model.eps") {
      c.eps = to_double(val, line, key);
    } else if (key == "time.dt") {
      c.dt = val == "auto" ? 0.0 : to_double(val, line, key);
      if (val != "auto" && !(c.dt > 0.0)) fail(line, "time.dt must be > 0 or 'auto'");
    } else if (key == "time.t_end") {
      c.t_end = to_double(val, line, key);
    } else if (key == "time.cfl_safety") {
      c.cfl_safety = to_double(val, line, key);
    } else if (key == "time.record_stride") {
      c.record_stride = static_cast<int>(to_int(val, line, key));
    } else if (key == "poisson.tol") {
      c.poisson_tol = to_double(val, line, key);
    } else if (key == "poisson.method") {
      if (val == "spectral") {
        c.poisson_method = PoissonMethod::Spectral;
      } else if (val == "cg") {
        c.poisson_method = PoissonMethod::ConjugateGradient;
      } else {
        fail(line, "poisson.method must be 'spectral' or 'cg'");
      }
    } else if (key == "initial.preset") {
      c.initial.preset = val;
    } else if (key == "initial.amplitude") {
      c.initial.amplitude = to_double(val, line, key);
    } else if (key == "output.records") {
      c.records_path = val;
    } else if (key == "output.summary") {
      c.summary_path = val;
    } else if (key == "seed") {
      const long long s = to_int(val, line, key);
      if (s < 0) fail(line, "seed must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (split_indexed(key, "species", idx, field, line)) {
      if (c.species.size() <= idx) c.species.resize(idx + 1);
      SpeciesSpec& s = c.species[idx];
      if (field == "z") {
        s.z = static_cast<int>(to_int(val, line, key));
      } else if (field == "diff") {
        s.diff = to_double(val, line, key);
      } else if (field == "label") {
        s.label = val;
      } else {
        fail(line, "unknown species field '" + field + "'");
      }
    } else if (split_indexed(key, "initial", idx, field, line)) {
      if (c.initial.modes.size() <= idx) c.initial.modes.resize(idx + 1);
      ModeSpec& m = c.initial.modes[idx];
      if (field == "mean") {
        m.mean = to_double(val, line, key);
      } else if (field == "amplitude") {
        m.amplitude = to_double(val, line, key);
      } else if (field == "kx") {
        m.kx = static_cast<int>(to_int(val, line, key));
      } else if (field == "ky") {
        m.ky = static_cast<int>(to_int(val, line, key));
      } else {
        fail(line, "unknown initial field '" + field + "'");
      }
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  c.finalize();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::emit() const {
  std::ostringstream o;
  o << "grid.nx = " << nx << "\n"
    << "grid.ny = " << ny << "\n"
    << "grid.lx = " << format_double(lx) << "\n"
    << "grid.ly = " << format_double(ly) << "\n"
    << "model.eps = " << format_double(eps) << "\n";
  for (std::size_t i = 0; i < species.size(); ++i) {
    const std::string p = "species." + std::to_string(i + 1);
    o << p << ".z = " << species[i].z << "\n" << p << ".diff = " << format_double(species[i].diff) << "\n";
    if (!species[i].label.empty()) o << p << ".label = " << species[i].label << "\n";
  }
  o << "time.dt = " << (dt > 0.0 ? format_double(dt) : std::string("auto")) << "\n"
    << "time.t_end = " << format_double(t_end) << "\n"
    << "time.cfl_safety = " << format_double(cfl_safety) << "\n"
    << "time.record_stride = " << record_stride << "\n"
    << "poisson.tol = " << format_double(poisson_tol) << "\n"
    << "poisson.method = " << method_name(poisson_method) << "\n"
    << "initial.preset = " << initial.preset << "\n"
    << "initial.amplitude = " << format_double(initial.amplitude) << "\n";
  for (std::size_t i = 0; i < initial.modes.size(); ++i) {
    const std::string p = "initial." + std::to_string(i + 1);
    const ModeSpec& m = initial.modes[i];
    o << p << ".mean = " << format_double(m.mean) << "\n"
      << p << ".amplitude = " << format_double(m.amplitude) << "\n"
      << p << ".kx = " << m.kx << "\n"
      << p << ".ky = " << m.ky << "\n";
  }
  o << "output.records = " << records_path << "\n"
    << "output.summary = " << summary_path << "\n"
    << "seed = " << seed << "\n";
  return o.str();
}

void RunConfig::finalize() {
  const std::string& p = initial.preset;
  if (species.empty()) {
    if (p == "four-species-mixed") {
      species = {{1, 1.0, "cation"}, {-1, 1.0, "anion"}, {2, 0.5, "dication"}, {-2, 2.0, "dianion"}};
    } else {
      species = {{1, 1.0, "cation"}, {-1, 1.0, "anion"}};
    }
  }
  if (p != "equilibrium" && p != "two-species-cosine" && p != "four-species-mixed" &&
      p != "random-pair" && p != "custom") {
    throw ValidationError("unknown initial.preset '" + p +
                          "' (expected equilibrium, two-species-cosine, four-species-mixed, "
                          "random-pair, custom)");
  }
  const std::size_t n = species.size();
  if ((p == "two-species-cosine" || p == "random-pair") && n != 2) {
    throw ValidationError("preset '" + p + "' needs exactly 2 species");
  }
  if (p == "four-species-mixed" && n != 4) throw ValidationError("preset 'four-species-mixed' needs 4 species");
  if (p == "custom" && initial.modes.size() != n) {
    throw ValidationError("preset 'custom' needs initial.<i>.* entries for each of the " +
                          std::to_string(n) + " species");
  }
  if (p != "custom" && !initial.modes.empty()) {
    throw ValidationError("initial.<i>.* entries are only used by the custom preset");
  }
  if (!(initial.amplitude >= 0.0)) throw ValidationError("initial.amplitude must be >= 0");
  if (p == "two-species-cosine" || p == "four-species-mixed") {
    if (initial.amplitude >= 1.0) throw ValidationError("initial.amplitude must be < 1 for positivity");
  }
  (void)grid();
  sim_params().validate();
}

Grid2D RunConfig::grid() const { return Grid2D(nx, ny, lx, ly); }

SimParams RunConfig::sim_params() const {
  SimParams sp;
  sp.species = species;
  sp.eps = eps;
  sp.dt = dt;
  sp.t_end = t_end;
  sp.cfl_safety = cfl_safety;
  sp.record_stride = record_stride;
  sp.poisson.tol = poisson_tol;
  sp.poisson.method = poisson_method;
  return sp;
}

std::vector<Field> RunConfig::initial_fields() const {
  const Grid2D g = grid();
  const double a = initial.amplitude;
  const std::string& p = initial.preset;
  std::vector<Field> out;
  if (p == "equilibrium") {
    for (std::size_t i = 0; i < species.size(); ++i) out.emplace_back(g, 1.0);
    // Mean 1 per species: rescale so sum z_i c_i = 0 for arbitrary valences.
    int zsum = 0;
    for (const SpeciesSpec& s : species) zsum += s.z;
    if (zsum != 0) {
      int pos = 0;
      int neg = 0;
      for (const SpeciesSpec& s : species) (s.z > 0 ? pos : neg) += std::abs(s.z);
      for (std::size_t i = 0; i < species.size(); ++i) {
        if (species[i].z < 0) out[i].values() *= static_cast<double>(pos) / neg;
      }
    }
  } else if (p == "two-species-cosine") {
    out.push_back(mode_field(g, {1.0, a, 1, 0}));
    out.push_back(mode_field(g, {1.0, a, 0, 1}));
  } else if (p == "four-species-mixed") {
    out.push_back(mode_field(g, {1.0, a, 1, 0}));
    out.push_back(mode_field(g, {1.0, a, 0, 1}));
    out.push_back(mode_field(g, {0.5, 0.5 * a, 1, 1}));
    out.push_back(mode_field(g, {0.5, 0.5 * a, 2, 1}));
  } else if (p == "random-pair") {
    Corpus c = make_corpus(CorpusKind::RandomFourier, 1, seed, g, a > 0.0 ? a : 0.0);
    Field first = std::move(c.fields.front());
    out.emplace_back(g, average(first));
    out.insert(out.begin(), std::move(first));
  } else {
    for (const ModeSpec& m : initial.modes) out.push_back(mode_field(g, m));
  }
  return out;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.nx == b.nx && a.ny == b.ny && a.lx == b.lx && a.ly == b.ly && a.species == b.species &&
         a.eps == b.eps && a.dt == b.dt && a.t_end == b.t_end && a.cfl_safety == b.cfl_safety &&
         a.record_stride == b.record_stride && a.poisson_tol == b.poisson_tol &&
         a.poisson_method == b.poisson_method && a.initial == b.initial &&
         a.records_path == b.records_path && a.summary_path == b.summary_path && a.seed == b.seed;
}

}  // namespace nplab
