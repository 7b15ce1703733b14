#pragma once

// Subcommands of the nhscat executable. Each reads a RunConfig, computes, and
// writes CSV/JSON files into the output directory.

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>

namespace nhscat {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitConfig = 2;

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;  // overrides the config's output key
  bool dry_run = false;
  int threads = 1;
};

std::span<const std::string_view> command_names();

/// Runs one subcommand and returns its exit code. Diagnostics go to err,
/// summaries to out. Never throws for config or computation failures.
int run_command(std::string_view name, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace nhscat
