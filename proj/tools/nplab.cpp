// nplab: Nernst-Planck-Poisson simulations and functional-inequality checks.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nplab/commands.hpp"

namespace {

void add_corpus_options(CLI::App* cmd, nplab::CorpusArgs& args) {
  cmd->add_option("-p,--p", args.p, "exponent p")->capture_default_str();
  cmd->add_option("-d,--d", args.d, "dimension d")->capture_default_str();
  cmd->add_option("--corpus", args.kind,
                  "cosine | gaussian-bump | random-fourier | two-bump | constant")
      ->capture_default_str();
  cmd->add_option("--count", args.count, "corpus size")->capture_default_str();
  cmd->add_option("--grid", args.grid, "grid cells per side")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nernst-Planck-Poisson simulator and inequality lab"};
  app.require_subcommand(1);

  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  auto* out_opt = app.add_option("--out", out_dir, "directory for output files");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_flag("-q,--quiet", quiet, "suppress reports on standard output");

  std::string config;
  auto* simulate = app.add_subcommand("simulate", "run a simulation from a config file");
  simulate->add_option("-c,--config", config, "run configuration")->required();

  nplab::CorpusArgs gni_args;
  auto* gni = app.add_subcommand("check-gni", "search and verify the interpolation constant");
  add_corpus_options(gni, gni_args);

  nplab::CorpusArgs lsi_args;
  auto* lsi = app.add_subcommand("check-lsi", "search and verify the log-Sobolev constant");
  add_corpus_options(lsi, lsi_args);

  std::string study = "poisson";
  int levels = 4;
  auto* conv = app.add_subcommand("convergence", "observed order of a discretization");
  conv->add_option("study", study, "poisson | energy-identity")->required();
  conv->add_option("-l,--levels", levels, "refinement levels (>= 3)")->capture_default_str();

  // Global flags are accepted after the subcommand as well.
  for (CLI::App* sub : {simulate, gni, lsi, conv}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nplab::kExitValidation;
  }

  nplab::CommandContext ctx;
  if (*out_opt) ctx.out_dir = out_dir;
  if (*seed_opt) {
    ctx.seed = seed;
    gni_args.seed = seed;
    lsi_args.seed = seed;
  }
  ctx.quiet = quiet;

  if (*simulate) return nplab::cmd_simulate(config, ctx);
  if (*gni) return nplab::cmd_check_gni(gni_args, ctx);
  if (*lsi) return nplab::cmd_check_lsi(lsi_args, ctx);
  return nplab::cmd_convergence(study, levels, ctx);
}
