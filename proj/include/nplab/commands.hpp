#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nplab/model.hpp"

namespace nplab {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitSolver = 3,
  kExitCheckFailed = 4,
};

struct CommandContext {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;  ///< --seed, overrides the config file
  bool quiet = false;
  std::ostream* out = nullptr;  ///< JSON reports; stdout when null
  std::ostream* err = nullptr;  ///< diagnostics; stderr when null
};

/// Column names of the records CSV for N species.
std::vector<std::string> records_csv_header(std::size_t species);

void write_records_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

int cmd_simulate(const std::filesystem::path& config, const CommandContext& ctx);

struct CorpusArgs {
  int p = 4;
  int d = 2;
  std::string kind = "cosine";
  int count = 100;
  std::uint64_t seed = 1;
  int grid = 64;
};

int cmd_check_gni(const CorpusArgs& args, const CommandContext& ctx);
int cmd_check_lsi(const CorpusArgs& args, const CommandContext& ctx);

/// study is "poisson" or "energy-identity".
int cmd_convergence(const std::string& study, int levels, const CommandContext& ctx);

}  // namespace nplab
