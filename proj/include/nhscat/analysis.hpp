#pragma once

// Experiment drivers combining the scattering, pole and dynamics modules.

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nhscat/dynamics.hpp"
#include "nhscat/model.hpp"
#include "nhscat/poles.hpp"
#include "nhscat/scattering.hpp"

namespace nhscat {

struct PacketConfig {
  int center = -200;
  double width = 40.0;
  double k = std::numbers::pi / 3.0;
};

enum class Propagator { Stepper, Eigen };

struct SweepOptions {
  int sites = 400;
  PacketConfig packet;
  double t_extract = 240.0;
  Propagator propagator = Propagator::Stepper;
  double dt = 0.01;
  int threads = 1;
  double divergence_threshold = 0.10;
};

struct SweepRow {
  double param = 0.0;
  std::optional<Coefficients> ti;
  std::optional<PacketCoefficients> td;
  bool valid = false;
  int growing_poles = 0;
  std::vector<Pole> poles;
  double relative_deviation = 0.0;  // max over R_L, T_L of |TD - TI| / TI
  bool diverged = false;
  std::string error;                // first sub-module failure at this point
};

struct SweepReport {
  Family family;
  std::string parameter;
  std::vector<SweepRow> rows;
};

/// Inclusive grid start, start + step, ... <= stop (+1e-9 step slack).
/// Throws std::invalid_argument for step <= 0 or stop < start.
std::vector<double> make_grid(double start, double stop, double step);

/// One row per grid value of the swept parameter. Failures are recorded in the
/// row and mark it diverged; the sweep itself does not abort.
SweepReport sweep_ti_vs_td(const CenterModel& base, std::span<const double> grid,
                           const SweepOptions& options);

struct CriticalRow {
  CenterModel model;
  double computed = 0.0;
  double closed_form = 0.0;
  bool zero_threshold = false;
  bool growing_at_tiny_gamma = false;  // first-quadrant pole at gamma = 1e-9
  bool invalid_at_tiny_gamma = false;
};

/// gamma_c for the five reference models (gamma0 = 1, kappa = -1), each computed
/// by bisection and paired with its closed form.
std::vector<CriticalRow> critical_table();

}  // namespace nhscat
