#pragma once

// Run configuration for the command-line front end, read from a YAML file.
// Every mapping rejects keys it does not know.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhscat/analysis.hpp"
#include "nhscat/model.hpp"

namespace nhscat {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line, int column);
  int line() const noexcept { return line_; }      // 1-based, 0 if unknown
  int column() const noexcept { return column_; }  // 1-based, 0 if unknown

 private:
  int line_;
  int column_;
};

struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  std::vector<double> grid() const { return make_grid(start, stop, step); }
};

struct TimeConfig {
  double dt = 0.01;
  double t_end = 240.0;
  double record_every = 1.0;
  Propagator propagator = Propagator::Stepper;
  bool auto_refine = true;
  std::optional<double> extract_at;
  std::optional<std::pair<double, double>> growth_window;
  std::vector<double> snapshots;
};

struct KGridConfig {
  double start = 0.01;
  double stop = 3.13;
  int count = 200;
};

struct SpectrumConfig {
  double threshold = 0.05;
  int max_sites = 2000;
  bool profiles = true;
  bool eigenvectors = false;  // full right-eigenvector dump
};

struct RunConfig {
  CenterModel model = ImaginaryOnsite{1.0, 1.2};
  int sites = 800;
  PacketConfig packet;
  TimeConfig time;
  KGridConfig k_grid;
  std::optional<SweepSpec> sweep;
  SpectrumConfig spectrum;
  std::string output = ".";
  std::uint64_t seed = 0;  // reserved; every computation is deterministic
};

/// Parses and validates. Throws ConfigError with the offending position.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Number, or a multiple of pi written like "pi/3", "2*pi/3", "0.5 pi".
std::optional<double> parse_angle(const std::string& text);

}  // namespace nhscat
