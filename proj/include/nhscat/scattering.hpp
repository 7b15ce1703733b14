#pragma once

// Time-independent scattering off the two-site center: closed-form amplitudes
// and an independent direct linear solve used to cross-check them.

#include <Eigen/Dense>

#include "nhscat/model.hpp"

namespace nhscat {

struct Amplitudes {
  double k = 0.0;
  cplx r_left;
  cplx t_left;
  cplx r_right;
  cplx t_right;
};

struct Coefficients {
  double R_left = 0.0;
  double T_left = 0.0;
  double R_right = 0.0;
  double T_right = 0.0;
};

Coefficients coefficients(const Amplitudes& amplitudes);

/// |denominator| below this at real k is treated as a spectral singularity.
inline constexpr double kDivergenceThreshold = 1e-8;

/// Common denominator of all four closed-form amplitudes, continued to complex k.
/// Its zeros are the S-matrix poles.
cplx amplitude_denominator(const CenterModel& model, cplx k);

/// Closed forms, valid for 0 <= k <= pi. At the band edges the limiting values
/// are returned (l'Hopital where numerator and denominator vanish together).
/// Throws DivergentAmplitudes when k sits on a pole, std::invalid_argument
/// for k outside [0, pi].
Amplitudes amplitudes_closed_form(const CenterModel& model, double k);

struct NumericScatteringOptions {
  int window_sites = 41;
  double min_rcond = 1e-14;
};

/// Solves the lattice Schrodinger equation on a finite window with incoming and
/// outgoing plane waves pinned on the two outermost sites of each side.
/// Requires 0 < k < pi. Throws SingularSystem when the window system is singular.
Amplitudes amplitudes_numeric(const CenterModel& model, double k,
                              const NumericScatteringOptions& options = {});

/// S = [[r_L, t_R], [t_L, r_R]].
Eigen::Matrix2cd s_matrix(const Amplitudes& amplitudes);
Eigen::Matrix2cd s_matrix(const CenterModel& model, double k);

}  // namespace nhscat
