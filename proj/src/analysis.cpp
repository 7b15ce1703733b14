#include "nhscat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nhscat/parallel.hpp"

namespace nhscat {

namespace {

double relative_gap(double td, double ti) {
  if (!std::isfinite(td)) return std::numeric_limits<double>::infinity();
  return ti != 0.0 ? std::abs(td - ti) / std::abs(ti) : std::abs(td - ti);
}

SweepRow evaluate_point(const CenterModel& model, double param, const SweepOptions& options) {
  SweepRow row;
  row.param = param;

  const Verdict verdict = validity_verdict(model);
  row.valid = verdict.valid;
  row.growing_poles = static_cast<int>(verdict.offending_poles.size());
  row.poles = verdict.all_poles;

  try {
    row.ti = coefficients(amplitudes_closed_form(model, options.packet.k));
  } catch (const std::exception& e) {
    row.error = std::string("time-independent: ") + e.what();
  }

  try {
    const LatticeSpec lattice{options.sites};
    const HamiltonianMatrix h = build_finite_hamiltonian(model, lattice);
    const WavePacket packet =
        gaussian_packet(lattice, options.packet.center, options.packet.width, options.packet.k);
    EvolutionResult evolution{lattice};
    if (options.propagator == Propagator::Eigen) {
      const std::vector<double> times{0.0, options.t_extract};
      evolution = propagate_eigen(eigendecompose(h), packet, times);
    } else {
      StepperOptions stepper;
      stepper.dt = options.dt;
      stepper.t_end = options.t_extract;
      stepper.record_every = options.t_extract;
      evolution = propagate_stepper(h, packet, stepper);
    }
    row.td = extract_RT(evolution, options.t_extract);
  } catch (const std::exception& e) {
    if (row.error.empty()) row.error = std::string("time-dependent: ") + e.what();
  }

  if (row.ti && row.td) {
    row.relative_deviation = std::max(relative_gap(row.td->R_left, row.ti->R_left),
                                      relative_gap(row.td->T_left, row.ti->T_left));
  } else {
    row.relative_deviation = std::numeric_limits<double>::infinity();
  }
  row.diverged = !row.valid || !(row.relative_deviation <= options.divergence_threshold);
  return row;
}

}  // namespace

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (!(stop >= start)) throw std::invalid_argument("sweep stop lies below start: empty sweep");
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  grid.reserve(static_cast<std::size_t>(count) + 1);
  for (long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

SweepReport sweep_ti_vs_td(const CenterModel& base, std::span<const double> grid,
                           const SweepOptions& options) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  SweepReport report;
  report.family = family_of(base);
  report.parameter = std::string(swept_parameter_name(report.family));
  report.rows.resize(grid.size());
  parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    report.rows[i] = evaluate_point(with_swept_parameter(base, grid[i]), grid[i], options);
  });
  return report;
}

std::vector<CriticalRow> critical_table() {
  const std::vector<std::pair<CenterModel, double>> cases = {
      {ImaginaryOnsite{1.0, 0.0}, 1.5},
      {UnequalHopping{-1.0, 0.0}, std::numbers::sqrt2},
      {ComplexHopping{-1.0, 0.0}, 0.0},
      {AntiHermitianHopping{-1.0, 0.0}, 0.0},
      {ImaginaryCoupling{0.0}, 1.0},
  };
  std::vector<CriticalRow> rows;
  for (const auto& [model, closed] : cases) {
    CriticalRow row;
    row.model = model;
    row.closed_form = closed;
    const CriticalPoint cp = critical_gamma(model);
    row.computed = cp.gamma;
    row.zero_threshold = cp.zero_threshold;
    const CenterModel tiny = with_swept_parameter(model, 1e-9);
    const PoleSet poles = solve_poles(tiny);
    row.growing_at_tiny_gamma = std::any_of(poles.poles.begin(), poles.poles.end(),
                                            [](const Pole& p) { return in_open_first_quadrant(p.k); });
    row.invalid_at_tiny_gamma = !validity_verdict(tiny).valid;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nhscat
