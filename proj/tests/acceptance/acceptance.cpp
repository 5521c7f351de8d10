// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nplab/commands.hpp"
#include "nplab/corpus.hpp"
#include "nplab/inequality.hpp"
#include "nplab/simulator.hpp"
#include "nplab/studies.hpp"

namespace fs = std::filesystem;
using namespace nplab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

int g_failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0.0 && secs > limit_s) {
    o.pass = false;
    o.detail += "; runtime over limit";
  }
  char timing[64];
  if (limit_s > 0.0) {
    std::snprintf(timing, sizeof timing, "%.2f s (limit %.0f s)", secs, limit_s);
  } else {
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
  }
  std::printf("%s [%d] %s: %s; %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), timing);
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Field random_field(const Grid2D& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(g);
  f.values() = f.values().unaryExpr([&](double) { return u(rng); });
  return f;
}

Faces random_faces(const Grid2D& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Faces F(g);
  F.x() = F.x().unaryExpr([&](double) { return u(rng); });
  F.y() = F.y().unaryExpr([&](double) { return u(rng); });
  F.zero_boundary();
  return F;
}

// Shared by criteria 8-10: the reference run with every step recorded.
struct ReferenceRun {
  std::vector<DiagnosticsRecord> records;
  double max_mass_drift = 0.0;
  double max_net_charge = 0.0;
  double min_conc = std::numeric_limits<double>::infinity();
  double seconds = 0.0;
};

ReferenceRun reference_run() {
  RunConfig cfg = reference_config(1.0);
  const Simulator sim(cfg.grid(), cfg.sim_params());
  ReferenceRun out;
  std::vector<double> mass0;
  const auto start = std::chrono::steady_clock::now();
  out.records = sim.run(cfg.initial_fields(), [&](const SimState& s) {
    if (mass0.empty()) {
      for (const Field& c : s.conc) mass0.push_back(integrate(c));
    }
    for (std::size_t i = 0; i < s.conc.size(); ++i) {
      out.max_mass_drift = std::max(out.max_mass_drift, std::abs(integrate(s.conc[i]) - mass0[i]) / mass0[i]);
      out.min_conc = std::min(out.min_conc, s.conc[i].min());
    }
    out.max_net_charge = std::max(out.max_net_charge, std::abs(integrate(s.rho)));
  });
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double eps_sweep_rate(double eps) {
  RunConfig cfg = reference_config(eps);
  cfg.record_stride = 20;
  cfg.finalize();
  const auto records = Simulator(cfg.grid(), cfg.sim_params()).run(cfg.initial_fields());
  return fit_decay_rate(records, 1e-10).r_hat;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_wall_time(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  j.erase("wall_time_s");
  return j.dump();
}

Outcome train_test(InequalityKind which, const char* label) {
  const Grid2D g(64, 64);
  const InequalitySpec spec{4, 2};
  const Corpus train = make_corpus(CorpusKind::Cosine, 500, 1, g);
  const Corpus test = make_corpus(CorpusKind::Cosine, 500, 2, g);
  const SearchedConstant found = search_constant(train.fields, spec, which);
  const ConstantCheck chk = check_constant(test.fields, spec, which, found.value);
  const bool ok = found.corpus_size == 500 && std::isfinite(found.value) && found.value > 0.0 &&
                  chk.failures == 0 && chk.margin >= 0.0;
  // The cosine family is a finite lattice, so independent draws can repeat members.
  int shared = 0;
  for (const Field& t : test.fields) {
    for (const Field& f : train.fields) {
      if (t == f) {
        ++shared;
        break;
      }
    }
  }
  return {ok, std::string(label) + " = " + sci(found.value) + " on seed 1, test seed 2 margin " +
                  sci(chk.margin) + ", failures " + std::to_string(chk.failures) + " (" +
                  std::to_string(shared) + "/500 test members also drawn in training)"};
}

}  // namespace

int main() {
  std::printf("nplab acceptance\n");

  criterion(1, "discrete calculus", 5.0, [] {
    std::mt19937_64 rng(2024);
    const Grid2D g(64, 64);
    double adj = 0.0;
    double gauss = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Field f = random_field(g, rng);
      const Faces F = random_faces(g, rng);
      const double lhs = inner(gradient(f), F);
      const double rhs = -inner(f, divergence(F));
      adj = std::max(adj, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
      gauss = std::max(gauss, std::abs(integrate(divergence(F))) / std::sqrt(inner(F, F)));
    }
    return Outcome{adj <= 1e-12 && gauss <= 1e-13,
                   "adjointness max rel " + sci(adj) + " (tol 1e-12), Gauss max " + sci(gauss) + " (tol 1e-13)"};
  });

  criterion(2, "Poisson convergence", 30.0, [] {
    const auto rows = poisson_convergence(4, 32);
    bool ok = true;
    std::string orders;
    for (const auto& r : rows) {
      if (!r.order) continue;
      ok = ok && std::abs(*r.order - 2.0) <= 0.4;
      orders += (orders.empty() ? "" : ", ") + sci(*r.order);
    }
    double mean = 0.0;
    for (int n : {32, 64, 128, 256}) {
      const Grid2D g(n, n);
      const Field rho = Field::sample(g, [](double x, double) { return std::cos(kPi * x); });
      mean = std::max(mean, std::abs(average(solve_poisson(rho, PoissonConfig{}))));
    }
    ok = ok && mean <= 1e-12;
    return Outcome{ok, "orders " + orders + " (2 +- 0.4), max |mean phi| " + sci(mean) + " (tol 1e-12)"};
  });

  criterion(3, "GNI exponent algebra", 1.0, [] {
    int terms = 0;
    int bad = 0;
    for (int d = 2; d <= 6; ++d) {
      const int pmax = d == 2 ? 24 : (2 * d) / (d - 2);
      for (int p = 2; p <= pmax; ++p) {
        for (const GniTerm& t : gni_exponent_table({p, d})) {
          ++terms;
          if (!(t.alpha + t.beta + t.gamma == Rational(p)) || t.beta + t.gamma < Rational(2)) ++bad;
        }
      }
    }
    return Outcome{bad == 0, std::to_string(terms) + " terms over d = 2..6 (p <= 24 at d = 2), " +
                                 std::to_string(bad) + " violations"};
  });

  criterion(4, "GNI sharpness", 0.0, [] {
    double worst = 0.0;
    double corr = 0.0;
    for (int p : {3, 4}) {
      for (const Grid2D& g : {Grid2D(64, 64), Grid2D(48, 32, 1.7, 0.9)}) {
        for (double c : {0.25, 1.0, 3.5}) {
          const GniSides s = gni_sides(Field(g, c), {p, 2}, 1.0);
          worst = std::max(worst, std::abs(s.lhs - s.sharp_term) / s.lhs);
          corr = std::max(corr, std::abs(s.corrector));
        }
      }
    }
    return Outcome{worst <= 1e-13 && corr == 0.0,
                   "max rel |lhs - sharp| " + sci(worst) + " (tol 1e-13), max corrector " + sci(corr)};
  });

  criterion(5, "GNI validity", 0.0, [] { return train_test(InequalityKind::Gni, "C"); });

  criterion(6, "LSI validity", 0.0, [] {
    Outcome o = train_test(InequalityKind::Lsi, "A_4");
    const Grid2D g(64, 64);
    double jensen = std::numeric_limits<double>::infinity();
    double holder = std::numeric_limits<double>::infinity();
    double identity = 0.0;
    for (std::uint64_t seed : {1u, 2u}) {
      for (const Field& f : make_corpus(CorpusKind::Cosine, 500, seed, g).fields) {
        const LsiIntermediate m = lsi_intermediate_checks(f, {4, 2});
        jensen = std::min(jensen, m.jensen_slack);
        holder = std::min(holder, m.holder_slack);
        identity = std::max(identity, m.identity_error);
      }
    }
    o.pass = o.pass && jensen >= -1e-10 && holder >= -1e-10 && identity <= 1e-12;
    o.detail += "; min Jensen slack " + sci(jensen) + ", min Hoelder slack " + sci(holder) +
                " (tol -1e-10), identity error " + sci(identity) + " (tol 1e-12)";
    return o;
  });

  criterion(7, "log lemma", 0.0, [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(0.0, 10.0);
    std::uniform_int_distribution<int> expo(1, 3);
    std::uniform_int_distribution<int> count(1, 4);
    std::vector<double> xs(100000);
    for (int k = 0; k < 100000; ++k) xs[k] = 1000.0 * k / 99999.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::pair<double, double>> cs;
      for (int i = count(rng); i > 0; --i) cs.emplace_back(coef(rng), expo(rng));
      worst = std::max(worst, log_lemma_worst(cs, log_lemma_constant(cs), xs));
    }
    double analytic = 0.0;
    for (double c : {0.5, 2.0, 10.0}) analytic = std::max(analytic, std::abs(log_lemma_constant({{c, 1.0}}) - c));
    analytic = std::max(analytic, std::abs(log_lemma_constant({{1.0, 2.0}}) - 1.0));
    return Outcome{worst <= 0.0 && analytic <= 1e-6,
                   "max ln(1+f) - A x " + sci(worst) + " over 100 sets x 1e5 points, analytic error " + sci(analytic) +
                       " (tol 1e-6)"};
  });

  const ReferenceRun ref = [] {
    try {
      return reference_run();
    } catch (const std::exception& e) {
      std::printf("reference run failed: %s\n", e.what());
      return ReferenceRun{};
    }
  }();

  criterion(8, "simulator conservation", 0.0, [&] {
    const bool ok = !ref.records.empty() && ref.max_mass_drift <= 1e-12 && ref.max_net_charge <= 1e-11 &&
                    ref.min_conc >= 0.0 && ref.seconds < 60.0;
    char secs[48];
    std::snprintf(secs, sizeof secs, "run %.1f s (limit 60 s)", ref.seconds);
    return Outcome{ok, "mass drift " + sci(ref.max_mass_drift) + " (tol 1e-12), |int rho| " +
                           sci(ref.max_net_charge) + " (tol 1e-11), min c " + sci(ref.min_conc) + ", " + secs};
  });

  criterion(9, "energy identity", 0.0, [&] {
    const auto rows = energy_identity_convergence(3);
    bool ok = !ref.records.empty();
    std::string orders;
    for (const auto& r : rows) {
      if (!r.order) continue;
      ok = ok && std::abs(*r.order - 1.0) <= 0.4;
      orders += (orders.empty() ? "" : ", ") + sci(*r.order);
    }
    const double e0 = ref.records.empty() ? 0.0 : ref.records.front().energy;
    double rise = -std::numeric_limits<double>::infinity();
    double order_gap = std::numeric_limits<double>::infinity();
    double lower_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ref.records.size(); ++k) {
      const auto& r = ref.records[k];
      if (k > 0) rise = std::max(rise, r.energy - ref.records[k - 1].energy);
      // Relative to the two values: both fall to ~1e-19 by t = 2.
      const double scale = r.dissipation + r.dissipation_lower;
      if (scale > 0.0) order_gap = std::min(order_gap, (r.dissipation - r.dissipation_lower) / scale);
      lower_min = std::min(lower_min, r.dissipation_lower);
    }
    ok = ok && rise <= 1e-12 * e0 && order_gap >= -1e-12 && lower_min >= 0.0;
    return Outcome{ok, "orders " + orders + " (1 +- 0.4), max energy rise " + sci(rise) + " (tol " +
                           sci(1e-12 * e0) + "), min (D - D~)/(D + D~) " + sci(order_gap) +
                           " (tol -1e-12), min D~ " + sci(lower_min)};
  });

  criterion(10, "exponential decay", 0.0, [&] {
    const DecayFit fit = fit_decay_rate(ref.records, 1e-10);
    double ckp = -std::numeric_limits<double>::infinity();
    for (const auto& r : ref.records) ckp = std::max(ckp, r.ckp_violation);
    const double r1 = fit.r_hat;
    const double r01 = eps_sweep_rate(0.1);
    const double r001 = eps_sweep_rate(0.01);
    const double spread = (std::max({r1, r01, r001}) - std::min({r1, r01, r001})) / r1;
    const bool ok = fit.r_hat > 0.0 && fit.fit_residual <= 0.1 * std::abs(fit.slope) && ckp <= 1e-12 &&
                    spread < 0.25;
    return Outcome{ok, "r_hat " + sci(r1) + ", fit residual " + sci(fit.fit_residual) + " (tol " +
                           sci(0.1 * std::abs(fit.slope)) + ", " + std::to_string(fit.used) +
                           " records), ckp max " + sci(ckp) + " (tol 1e-12), eps sweep r_hat " + sci(r001) +
                           " / " + sci(r01) + " / " + sci(r1) + ", spread " + sci(spread) + " (tol 0.25)"};
  });

  criterion(11, "determinism", 0.0, [] {
    const fs::path dir = fs::temp_directory_path() / "nplab_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream(dir / "run.cfg") << "grid.nx = 32\ngrid.ny = 32\ntime.t_end = 0.25\n"
                                        "time.record_stride = 5\ninitial.preset = random-pair\n"
                                        "initial.amplitude = 0.4\n";
    }
    std::ostringstream sink;
    auto run_all = [&](const std::string& tag, const char* threads) {
      setenv("NP_LAB_THREADS", threads, 1);
      CommandContext ctx;
      ctx.out_dir = dir / tag;
      ctx.seed = 11;
      ctx.quiet = true;
      ctx.out = &sink;
      ctx.err = &sink;
      int rc = cmd_simulate(dir / "run.cfg", ctx);
      CorpusArgs args;
      args.kind = "random-fourier";
      args.count = 60;
      args.seed = 11;
      rc |= cmd_check_gni(args, ctx);
      rc |= cmd_check_lsi(args, ctx);
      return rc;
    };
    const int rc = run_all("a", "1") | run_all("b", "4");
    unsetenv("NP_LAB_THREADS");
    bool same = slurp(dir / "a/records.csv") == slurp(dir / "b/records.csv") &&
                !slurp(dir / "a/records.csv").empty();
    same = same && without_wall_time(slurp(dir / "a/summary.json")) == without_wall_time(slurp(dir / "b/summary.json"));
    same = same && slurp(dir / "a/check-gni.json") == slurp(dir / "b/check-gni.json");
    same = same && slurp(dir / "a/check-lsi.json") == slurp(dir / "b/check-lsi.json");
    fs::remove_all(dir);
    return Outcome{rc == 0 && same,
                   std::string("records CSV, summary JSON (without wall_time_s) and check reports ") +
                       (same ? "identical" : "differ") + " across two runs (1 and 4 workers), exit " +
                       std::to_string(rc)};
  });

  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
