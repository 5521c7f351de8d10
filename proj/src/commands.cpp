#include "nplab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nplab/config.hpp"
#include "nplab/corpus.hpp"
#include "nplab/inequality.hpp"
#include "nplab/simulator.hpp"
#include "nplab/studies.hpp"

namespace nplab {

namespace {

using nlohmann::json;

std::ostream& out_stream(const CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }
std::ostream& err_stream(const CommandContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::filesystem::path resolve(const CommandContext& ctx, const std::filesystem::path& p) {
  if (!ctx.out_dir || p.is_absolute()) return p;
  return *ctx.out_dir / p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write '" + path.string() + "'");
  os << text;
  if (!os) throw ValidationError("write failed for '" + path.string() + "'");
}

// Writes the report under --out (when given) and to the output stream unless quiet.
void emit_report(const CommandContext& ctx, const std::string& name, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (ctx.out_dir) write_file(*ctx.out_dir / (name + ".json"), text);
  if (!ctx.quiet) out_stream(ctx) << text;
}

template <class Fn>
int guarded(const CommandContext& ctx, const char* command, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    err_stream(ctx) << "nplab " << command << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    err_stream(ctx) << "nplab " << command << ": solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::filesystem::filesystem_error& e) {
    err_stream(ctx) << "nplab " << command << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err_stream(ctx) << "nplab " << command << ": internal error: " << e.what() << "\n";
    return kExitSolver;
  }
}

json gni_table_json(const std::vector<GniTerm>& table) {
  json rows = json::array();
  for (const GniTerm& t : table) {
    rows.push_back({t.alpha.str(), t.beta.str(), t.gamma.str()});
  }
  return rows;
}

Corpus corpus_from(const CorpusArgs& args) {
  if (args.grid < 2) throw ValidationError("grid size must be >= 2");
  return make_corpus(parse_corpus_kind(args.kind), args.count, args.seed, Grid2D(args.grid, args.grid));
}

constexpr double kControlValues[] = {0.5, 1.0, 2.5};

}  // namespace

std::vector<std::string> records_csv_header(std::size_t species) {
  std::vector<std::string> cols = {"t", "energy", "dissipation", "dissipation_lower"};
  for (std::size_t i = 1; i <= species; ++i) cols.push_back("mass_" + std::to_string(i));
  cols.push_back("net_charge");
  for (std::size_t i = 1; i <= species; ++i) cols.push_back("l1_dist_" + std::to_string(i));
  cols.push_back("min_conc");
  return cols;
}

void write_records_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  const std::size_t n = records.empty() ? 0 : records.front().mass.size();
  const auto header = records_csv_header(n);
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << "\n";
  for (const DiagnosticsRecord& r : records) {
    os << format_double(r.t) << ',' << format_double(r.energy) << ',' << format_double(r.dissipation)
       << ',' << format_double(r.dissipation_lower);
    for (double m : r.mass) os << ',' << format_double(m);
    os << ',' << format_double(r.net_charge);
    for (double d : r.l1_dist) os << ',' << format_double(d);
    os << ',' << format_double(r.min_conc) << "\n";
  }
}

int cmd_simulate(const std::filesystem::path& config, const CommandContext& ctx) {
  return guarded(ctx, "simulate", [&] {
    RunConfig cfg = RunConfig::load(config);
    if (ctx.seed) {
      cfg.seed = *ctx.seed;
      cfg.finalize();
    }
    const Simulator sim(cfg.grid(), cfg.sim_params());

    long steps = -1;  // the observer also sees the initial state
    double min_conc = std::numeric_limits<double>::infinity();
    const auto start = std::chrono::steady_clock::now();
    const auto records = sim.run(cfg.initial_fields(), [&](const SimState& s) {
      ++steps;
      for (const Field& c : s.conc) min_conc = std::min(min_conc, c.min());
    });
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream csv;
    write_records_csv(csv, records);
    write_file(resolve(ctx, cfg.records_path), csv.str());

    json summary;
    try {
      const DecayFit fit = fit_decay_rate(records, 1e-10);
      summary["r_hat"] = number_or_null(fit.r_hat);
      summary["fit_residual"] = number_or_null(fit.fit_residual);
    } catch (const InsufficientData&) {
      summary["r_hat"] = nullptr;
      summary["fit_residual"] = nullptr;
    }
    summary["energy_identity_residual"] =
        records.size() >= 2 ? number_or_null(energy_identity_residual(records)) : json(nullptr);
    double ckp = -std::numeric_limits<double>::infinity();
    for (const auto& r : records) ckp = std::max(ckp, r.ckp_violation);
    summary["ckp_max_violation"] = number_or_null(ckp);
    summary["steps"] = steps;
    summary["wall_time_s"] = wall;

    const std::string text = summary.dump(2) + "\n";
    write_file(resolve(ctx, cfg.summary_path), text);
    if (!ctx.quiet) out_stream(ctx) << text;
    if (!(min_conc >= 0.0)) {
      err_stream(ctx) << "nplab simulate: negative concentration " << min_conc << "\n";
      return static_cast<int>(kExitSolver);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_check_gni(const CorpusArgs& args, const CommandContext& ctx) {
  return guarded(ctx, "check-gni", [&] {
    const InequalitySpec spec{args.p, args.d};
    spec.require_gni();
    json report;
    report["p"] = spec.p;
    report["d"] = spec.d;
    report["table"] = gni_table_json(gni_exponent_table(spec));
    if (spec.d != 2) {
      // Field norms on a 2D grid say nothing about d != 2; report the algebra only.
      report["searched_C"] = nullptr;
      report["margin"] = nullptr;
      report["corpus_size"] = 0;
      report["sharpness_pass"] = nullptr;
      emit_report(ctx, "check-gni", report);
      return static_cast<int>(kExitOk);
    }

    const Corpus corpus = corpus_from(args);
    const SearchedConstant found = search_constant(corpus.fields, spec, InequalityKind::Gni);

    const Grid2D grid(args.grid, args.grid);
    bool sharp = true;
    for (double c : kControlValues) {
      const GniSides s = gni_sides(Field(grid, c), spec, found.value);
      sharp = sharp && std::abs(s.lhs - s.sharp_term) <= 1e-13 * s.lhs && s.corrector == 0.0;
    }

    report["searched_C"] = number_or_null(found.value);
    report["margin"] = number_or_null(found.margin);
    report["corpus_size"] = found.corpus_size;
    report["skipped"] = found.skipped;
    report["corpus_kind"] = to_string(corpus.kind);
    report["sharpness_pass"] = sharp;
    emit_report(ctx, "check-gni", report);
    const bool ok = sharp && found.margin >= 0.0 && std::isfinite(found.value);
    return static_cast<int>(ok ? kExitOk : kExitCheckFailed);
  });
}

int cmd_check_lsi(const CorpusArgs& args, const CommandContext& ctx) {
  return guarded(ctx, "check-lsi", [&] {
    const InequalitySpec spec{args.p, args.d};
    spec.require_lsi();
    json report;
    report["p"] = spec.p;
    report["d"] = spec.d;
    if (spec.d != 2) {
      report["searched_A"] = nullptr;
      report["margin"] = nullptr;
      report["corpus_size"] = 0;
      report["jensen_min_slack"] = nullptr;
      report["holder_min_slack"] = nullptr;
      report["identity_max_error"] = nullptr;
      report["equality_case"] = nullptr;
      emit_report(ctx, "check-lsi", report);
      return static_cast<int>(kExitOk);
    }

    const Corpus corpus = corpus_from(args);
    const SearchedConstant found = search_constant(corpus.fields, spec, InequalityKind::Lsi);

    double jensen = std::numeric_limits<double>::infinity();
    double holder = std::numeric_limits<double>::infinity();
    double identity = 0.0;
    for (const Field& g : corpus.fields) {
      const LsiIntermediate m = lsi_intermediate_checks(g, spec);
      jensen = std::min(jensen, m.jensen_slack);
      holder = std::min(holder, m.holder_slack);
      identity = std::max(identity, m.identity_error);
    }

    report["searched_A"] = number_or_null(found.value);
    report["margin"] = number_or_null(found.margin);
    report["corpus_size"] = found.corpus_size;
    report["skipped"] = found.skipped;
    report["corpus_kind"] = to_string(corpus.kind);
    report["jensen_min_slack"] = number_or_null(jensen);
    report["holder_min_slack"] = number_or_null(holder);
    report["identity_max_error"] = number_or_null(identity);
    report["equality_case"] = found.skipped == found.corpus_size;
    emit_report(ctx, "check-lsi", report);
    const bool ok = found.margin >= 0.0 && std::isfinite(found.value) && jensen >= -1e-10 &&
                    holder >= -1e-10 && identity <= 1e-12;
    return static_cast<int>(ok ? kExitOk : kExitCheckFailed);
  });
}

int cmd_convergence(const std::string& study, int levels, const CommandContext& ctx) {
  return guarded(ctx, "convergence", [&] {
    if (levels < 3) {
      throw ValidationError("convergence needs levels >= 3 to estimate an order (got " +
                            std::to_string(levels) + ")");
    }
    std::vector<ConvergenceRow> rows;
    double expected = 0.0;
    const char* step_name = "h";
    if (study == "poisson") {
      rows = poisson_convergence(levels);
      expected = 2.0;
    } else if (study == "energy-identity") {
      rows = energy_identity_convergence(levels);
      expected = 1.0;
      step_name = "dt";
    } else {
      throw ValidationError("unknown study '" + study + "' (expected poisson or energy-identity)");
    }

    bool ok = true;
    json table = json::array();
    for (const ConvergenceRow& r : rows) {
      json row;
      row[step_name] = r.step;
      row["error"] = number_or_null(r.error);
      if (r.order) {
        row["order"] = number_or_null(*r.order);
        ok = ok && std::abs(*r.order - expected) <= 0.4;
      } else {
        row["order"] = nullptr;
      }
      table.push_back(row);
    }
    json report;
    report["study"] = study;
    report["expected_order"] = expected;
    report["tolerance"] = 0.4;
    report["table"] = table;
    report["pass"] = ok;
    // The table is printed on failure even with --quiet.
    CommandContext shown = ctx;
    if (!ok) shown.quiet = false;
    emit_report(shown, "convergence-" + study, report);
    return static_cast<int>(ok ? kExitOk : kExitCheckFailed);
  });
}

}  // namespace nplab
