#pragma once

// Biorthogonal eigenanalysis of finite lattice Hamiltonians.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhscat/model.hpp"

namespace nhscat {

struct SpectrumOptions {
  int max_sites = 2000;
  double exceptional_threshold = 1e-10;
};

struct SpectrumResult {
  LatticeSpec lattice;
  Eigen::VectorXcd eigenvalues;  // sorted by real part, then imaginary part
  Eigen::MatrixXcd right;        // column n: psi_n, unit Euclidean norm
  Eigen::MatrixXcd left;         // column n: phi_n, phi_n^H psi_m = delta_nm
  // min over n of |<phi_n|psi_n>| with both vectors unit-normalised; the
  // reciprocal eigenvalue condition number.
  double min_self_overlap = 1.0;
  bool near_exceptional = false;

  Eigen::Index size() const { return eigenvalues.size(); }
};

SpectrumResult eigendecompose(const HamiltonianMatrix& hamiltonian,
                              const SpectrumOptions& options = {});

double participation_ratio(std::span<const cplx> amplitudes);

struct DecayFit {
  double alpha = 0.0;
  double alpha_stderr = 0.0;
  double r_squared = 0.0;
  int innermost = 5;       // |j| where the fit window starts
  int outermost_left = 0;  // largest |j| used on the left lead
  int outermost_right = 0; // largest j used on the right lead
};

/// Fits |psi_j|^2 ~ C_side e^{-2 alpha |j|} on both leads with a shared alpha.
/// Window: |j| >= 5, extended outward while |psi_j|^2 exceeds 1e3 * eps * max.
/// Throws FitFailure when either lead has fewer than 2 usable sites.
DecayFit fit_decay_profile(std::span<const cplx> amplitudes, const LatticeSpec& lattice);

inline constexpr double kMinDecayRSquared = 0.99;

struct BoundStateReport {
  Eigen::Index index = 0;
  cplx energy;
  int center_site = 0;
  std::optional<DecayFit> decay;  // unset when the profile is not exponential
  double participation_ratio = 0.0;
  std::string diagnostic;
};

inline constexpr double kDefaultBoundThreshold = 0.05;

/// States with Im E above threshold, with a localisation fit for each.
std::vector<BoundStateReport> detect_bound_states(const SpectrumResult& spectrum,
                                                  double threshold = kDefaultBoundThreshold);

struct ScalingRow {
  int sites = 0;
  double max_continuum_imag = 0.0;  // bound states excluded
  std::vector<cplx> bound_energies;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::optional<double> exponent;  // unset on the exact-zero branch
  std::optional<double> exponent_stderr;
  bool exact_zero = false;         // every continuum Im E below 1e-12
};

/// Max continuum Im E versus L with a power-law fit. Needs at least 3 sizes.
ScalingTable finite_size_scaling(const CenterModel& model, std::span<const int> sizes,
                                 double threshold = kDefaultBoundThreshold, int threads = 1);

}  // namespace nhscat
