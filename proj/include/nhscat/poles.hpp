#pragma once

// S-matrix poles in the strip -pi < Re k <= pi: location, classification,
// trajectories under parameter sweeps and the critical non-Hermiticity.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nhscat/model.hpp"

namespace nhscat {

enum class PoleClass {
  GrowingBound,         // Re k > 0, Im k > 0: outgoing, grows in time
  DecayingBound,        // Re k < 0, Im k > 0
  Antiresonant,         // Re k < 0, Im k < 0
  Resonant,             // Re k > 0, Im k < 0
  SpectralSingularity,  // on the real axis with 0 < Re k < pi
  RealAxisVirtual,      // on the real axis elsewhere, or on Re k in {0, pi} with Im k < 0
  AxisBound,            // Re k in {0, pi}, Im k > 0: bound state with real energy
};

std::string_view pole_class_name(PoleClass c);

/// Band for |Im k| (and for Re k near 0 or pi) treated as lying on an axis.
inline constexpr double kAxisTolerance = 1e-9;

PoleClass classify_pole(cplx k, double tolerance = kAxisTolerance);

struct Pole {
  cplx k;

  cplx energy() const { return dispersion(k); }
  PoleClass kind() const { return classify_pole(k); }
};

/// Strictly inside the open first quadrant, with Re k < pi. Unlike
/// classify_pole this uses the raw sign of Im k with no tolerance band.
bool in_open_first_quadrant(cplx k);

/// Maps Re k into (-pi, pi]; Re k == -pi goes to +pi.
cplx normalize_branch(cplx k);

struct PoleSet {
  std::vector<Pole> poles;  // sorted by Re k, then Im k
  int nominal_degree = 2;   // degree of the pole polynomial in z = e^{ik}
  bool degree_collapsed() const { return static_cast<int>(poles.size()) < nominal_degree; }
};

/// Pole-equation left-hand side (the shared amplitude denominator) at complex k.
cplx pole_equation_value(const CenterModel& model, cplx k);

/// Branch formulas in closed form. The on-site model uses the gamma0 = 1
/// reduction and otherwise defers to solve_poles_numeric. Hopping models use
/// the kappa = -1 expressions, or the general root of kappa_L kappa_R e^{2ik} = 1.
/// Throws PolesAtInfinity where both poles have left for -i*infinity.
PoleSet solve_poles_analytic(const CenterModel& model);

/// Polynomial coefficients of the pole equation in z, constant term first.
std::vector<cplx> pole_polynomial(const CenterModel& model);

/// Companion-matrix roots of the pole polynomial mapped back through
/// k = -i log z, polished by Newton steps on the pole equation.
/// A vanishing leading coefficient lowers the root count (see degree_collapsed).
PoleSet solve_poles_numeric(const CenterModel& model);

/// Analytic where it applies, numeric otherwise. Poles at infinity give an empty set.
PoleSet solve_poles(const CenterModel& model);

struct PoleTrajectory {
  Family family;
  std::string parameter;
  std::vector<double> grid;
  // poles[i][n] is pole n at grid[i]; labels follow the poles along the sweep.
  std::vector<std::vector<Pole>> poles;
};

/// Solves at every grid value and relabels poles between neighbouring points
/// by minimum total displacement.
PoleTrajectory trace_pole_trajectory(const CenterModel& base, std::span<const double> grid);

struct CriticalPoint {
  double gamma = 0.0;
  bool zero_threshold = false;  // a growing pole exists arbitrarily close to the range start
  int bisection_steps = 0;
};

struct CriticalSearch {
  double lower = 0.0;
  double upper = 3.0;
  int scan_points = 301;
  double tolerance = 1e-13;
};

/// Smallest value of the swept parameter (other parameters held) at which a pole
/// enters the open first quadrant. Throws NoCriticalPoint if none in range.
CriticalPoint critical_gamma(const CenterModel& model, const CriticalSearch& search = {});

struct Verdict {
  bool valid = true;
  std::vector<Pole> offending_poles;       // growing bound states
  std::vector<Pole> spectral_singularities;
  std::vector<Pole> all_poles;
  std::optional<double> critical_value;
  std::optional<double> gamma_margin;      // swept parameter minus critical value
};

/// Time-independent scattering is physically meaningful iff there is neither a
/// growing bound state nor a spectral singularity.
Verdict validity_verdict(const CenterModel& model);

}  // namespace nhscat
