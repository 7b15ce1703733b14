#pragma once

// Wave-packet evolution on the finite lattice: a biorthogonal eigen-expansion
// propagator and an independent RK4 stepper over the tridiagonal Hamiltonian.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nhscat/model.hpp"
#include "nhscat/spectrum.hpp"

namespace nhscat {

struct WavePacket {
  LatticeSpec lattice;
  int center = 0;
  double width = 1.0;
  double k = 0.0;
  Eigen::VectorXcd amplitudes;
  double boundary_tail = 0.0;  // max |Psi_j| on the two end sites
  bool tail_warning = false;   // boundary_tail >= 1e-8
};

/// Psi_j = N^{-1} exp(-(j - j0)^2 / (2 sigma^2)) exp(i k j), normalised to sum |Psi_j|^2 = 1.
WavePacket gaussian_packet(const LatticeSpec& lattice, int j0, double sigma, double k);

struct EvolutionResult {
  explicit EvolutionResult(const LatticeSpec& l) : lattice(l) {}

  LatticeSpec lattice;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> snapshots;
  std::vector<double> total_intensity;
  std::vector<double> reflected;         // sum over j <= -1
  std::vector<double> transmitted;       // sum over j >= 2
  std::vector<double> center_intensity;  // j = 0, 1
  double dt = 0.0;                       // step actually used (stepper only)

  /// Index of a recorded time within 1e-9.
  std::optional<std::size_t> find_time(double t) const;
};

/// 0, every, 2*every, ... up to t_end, with t_end appended if it is off the cadence.
std::vector<double> recording_times(double t_end, double every);

/// |Psi(t)> = sum_n <phi_n|Psi(0)> e^{-i E_n t} |psi_n>. Refuses spectra flagged
/// near an exceptional point (throws NearExceptionalPoint).
EvolutionResult propagate_eigen(const SpectrumResult& spectrum, const WavePacket& packet,
                                std::span<const double> times);

struct StepperOptions {
  double dt = 0.01;
  double t_end = 0.0;
  double record_every = 1.0;
  bool auto_refine = true;
  double refine_tolerance = 1e-8;
  double probe_time = 1.0;
  int max_halvings = 6;
};

/// Classical RK4 on i dPsi/dt = H Psi. The step is shrunk so that it divides
/// record_every; with auto_refine it is halved until a dt vs dt/2 probe run
/// agrees to refine_tolerance. For Hermitian H a norm jump above 10x between
/// steps throws StepperInstability.
EvolutionResult propagate_stepper(const HamiltonianMatrix& hamiltonian, const WavePacket& packet,
                                  const StepperOptions& options);

struct PacketCoefficients {
  double R_left = 0.0;
  double T_left = 0.0;
  double center = 0.0;  // separation diagnostic
};

/// Lead sums at a recorded time. Throws std::invalid_argument if t was not recorded.
PacketCoefficients extract_RT(const EvolutionResult& result, double t);

/// First recorded t after the center-intensity peak at which the center holds
/// less than `ratio` of the total.
std::optional<double> separation_time(const EvolutionResult& result, double ratio = 1e-4);

struct GrowthFit {
  double rate = 0.0;  // Gamma in total ~ e^{2 Gamma t}
  double rate_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

inline constexpr double kMinGrowthRSquared = 0.999;

/// Regression of ln(total intensity) on t over recorded times in [t_from, t_to].
/// Throws FitFailure for non-positive intensity or R^2 < 0.999.
GrowthFit fit_growth_rate(const EvolutionResult& result, double t_from, double t_to);

/// Default window [0.6 t_end, t_end].
GrowthFit fit_growth_rate(const EvolutionResult& result);

/// Shared-slope decay fit of a snapshot (same window rule as bound states).
/// Throws NotLocalized unless the center outshines the far leads by 10x.
DecayFit fit_spatial_decay(std::span<const cplx> snapshot, const LatticeSpec& lattice);

/// J(j) = i [psi*(j+1) psi(j) - psi(j+1) psi*(j)] between lattice labels j and j+1.
double probability_current(std::span<const cplx> snapshot, const LatticeSpec& lattice, int j);

}  // namespace nhscat
