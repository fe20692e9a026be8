#pragma once

#include "soliton/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace soliton {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kSolverFailure = 3,
  kPropertyFailure = 4,
};

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  bool deterministic = false;
};

/// Runs one subcommand (profile, halfwidth, bowl, solve, perron, verify),
/// writes its files into opt.out_dir, prints a short summary to `log`, and
/// maps failures onto the exit codes above. Diagnostics go to `err`.
int run_command(const std::string& name, const Config& cfg, const CommandOptions& opt, std::ostream& log,
                std::ostream& err);

}  // namespace soliton
