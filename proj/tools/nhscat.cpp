#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nhscat/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nhscat: scattering, poles and wave-packet dynamics of non-Hermitian two-site centers"};
  app.require_subcommand(1);

  const std::map<std::string_view, std::string> blurb{
      {"scatter", "time-independent R and T over a k grid"},
      {"poles", "S-matrix pole trajectories over the sweep"},
      {"evolve", "wave-packet evolution on the finite lattice"},
      {"spectrum", "finite-lattice eigenvalues and bound states"},
      {"sweep", "time-independent vs packet R and T over the sweep"},
      {"validate", "is the time-independent picture valid here?"},
  };

  nhscat::CommandOptions options;
  std::string config;
  std::string out;
  for (std::string_view name : nhscat::command_names()) {
    CLI::App* sub = app.add_subcommand(std::string(name), blurb.at(name));
    sub->add_option("--config", config, "YAML run configuration")->required();
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_flag("--dry-run", options.dry_run, "validate the configuration and exit");
    sub->add_option("--threads", options.threads, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nhscat::kExitConfig;
  }

  options.config = config;
  if (!out.empty()) options.out = out;
  const std::string name = app.get_subcommands().front()->get_name();
  return nhscat::run_command(name, options, std::cout, std::cerr);
}
