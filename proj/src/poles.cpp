#include "nhscat/poles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "nhscat/error.hpp"
#include "nhscat/scattering.hpp"

namespace nhscat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void sort_poles(std::vector<Pole>& poles) {
  std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) {
    if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
    return a.k.imag() < b.k.imag();
  });
}

PoleSet make_set(std::initializer_list<cplx> ks) {
  PoleSet set;
  for (cplx k : ks) set.poles.push_back(Pole{normalize_branch(k)});
  sort_poles(set.poles);
  return set;
}

cplx pole_equation_derivative(const CenterModel& model, cplx k) {
  if (const auto* m = std::get_if<ImaginaryOnsite>(&model)) {
    return -m->gamma0 * m->gamma1 * std::exp(kI * k) + 2.0 * std::cos(k);
  }
  const Hoppings h = *center_hoppings(model);
  return -2.0 * kI * h.left * h.right * std::exp(2.0 * kI * k);
}

PoleSet onsite_unit_gain(double g1) {
  if (g1 == 1.0) {
    throw PolesAtInfinity("gamma1 = 1 with gamma0 = 1: both poles at -i*infinity");
  }
  if (g1 < 1.0) {
    const double re = std::asin(std::sqrt(1.0 - g1) / 2.0);
    const double im = 0.5 * std::log1p(-g1);
    return make_set({cplx{-kPi + re, im}, cplx{-re, im}});
  }
  const double s = std::sqrt((g1 + 3.0) / (g1 - 1.0));
  return make_set({cplx{-kPi / 2.0, -std::log(0.5 * (1.0 + s))},
                   cplx{kPi / 2.0, -std::log(0.5 * (-1.0 + s))}});
}

PoleSet hopping_general(const Hoppings& h) {
  const cplx p = h.left * h.right;
  if (p == cplx{}) throw PolesAtInfinity("kappa_L * kappa_R = 0: no finite poles");
  const double re = -std::arg(p) / 2.0;
  const double im = 0.5 * std::log(std::abs(p));
  return make_set({cplx{re, im}, cplx{re + kPi, im}});
}

}  // namespace

std::string_view pole_class_name(PoleClass c) {
  switch (c) {
    case PoleClass::GrowingBound: return "growing_bound";
    case PoleClass::DecayingBound: return "decaying_bound";
    case PoleClass::Antiresonant: return "antiresonant";
    case PoleClass::Resonant: return "resonant";
    case PoleClass::SpectralSingularity: return "spectral_singularity";
    case PoleClass::RealAxisVirtual: return "real_axis_virtual";
    case PoleClass::AxisBound: return "axis_bound";
  }
  return "unknown";
}

PoleClass classify_pole(cplx k, double tol) {
  const double kr = k.real();
  const double ki = k.imag();
  const bool on_edge = std::abs(kr) < tol || std::abs(std::abs(kr) - kPi) < tol;
  if (std::abs(ki) < tol) {
    return (kr > tol && kr < kPi - tol) ? PoleClass::SpectralSingularity
                                        : PoleClass::RealAxisVirtual;
  }
  if (on_edge) return ki > 0.0 ? PoleClass::AxisBound : PoleClass::RealAxisVirtual;
  if (kr > 0.0) return ki > 0.0 ? PoleClass::GrowingBound : PoleClass::Resonant;
  return ki > 0.0 ? PoleClass::DecayingBound : PoleClass::Antiresonant;
}

bool in_open_first_quadrant(cplx k) {
  constexpr double edge = 1e-12;
  return k.imag() > 0.0 && k.real() > edge && k.real() < kPi - edge;
}

cplx normalize_branch(cplx k) {
  double re = std::remainder(k.real(), 2.0 * kPi);  // [-pi, pi]
  if (re <= -kPi) re += 2.0 * kPi;
  return {re, k.imag()};
}

cplx pole_equation_value(const CenterModel& model, cplx k) {
  return amplitude_denominator(model, k);
}

std::vector<cplx> pole_polynomial(const CenterModel& model) {
  if (const auto* m = std::get_if<ImaginaryOnsite>(&model)) {
    // Multiply the pole equation by z and use 2 sin k = -i (z - 1/z).
    return {kI, cplx{m->gamma0 - m->gamma1, 0.0}, kI * (m->gamma0 * m->gamma1 - 1.0)};
  }
  const Hoppings h = *center_hoppings(model);
  return {cplx{1.0, 0.0}, cplx{}, -h.left * h.right};
}

PoleSet solve_poles_analytic(const CenterModel& model) {
  if (const auto* m = std::get_if<ImaginaryOnsite>(&model)) {
    if (m->gamma0 != 1.0 || m->gamma1 < 0.0) return solve_poles_numeric(model);
    return onsite_unit_gain(m->gamma1);
  }
  if (const auto* m = std::get_if<UnequalHopping>(&model); m && m->kappa == -1.0) {
    const double g = m->gamma;
    const double g2 = g * g;
    if (g2 == 1.0) throw PolesAtInfinity("|gamma| = 1: kappa_R or kappa_L vanishes");
    if (g2 < 1.0) {
      const double im = 0.5 * std::log1p(-g2);
      return make_set({cplx{0.0, im}, cplx{kPi, im}});
    }
    const double im = 0.5 * std::log(g2 - 1.0);
    return make_set({cplx{-kPi / 2.0, im}, cplx{kPi / 2.0, im}});
  }
  if (const auto* m = std::get_if<ComplexHopping>(&model); m && m->kappa == -1.0) {
    const double re = std::atan(m->gamma);
    const double im = 0.5 * std::log1p(m->gamma * m->gamma);
    return make_set({cplx{-kPi + re, im}, cplx{re, im}});
  }
  if (const auto* m = std::get_if<AntiHermitianHopping>(&model); m && m->kappa == -1.0) {
    const double im = 0.5 * std::log1p(m->gamma * m->gamma);
    return make_set({cplx{-kPi / 2.0, im}, cplx{kPi / 2.0, im}});
  }
  if (const auto* m = std::get_if<ImaginaryCoupling>(&model)) {
    if (m->gamma == 0.0) throw PolesAtInfinity("gamma = 0: poles at -i*infinity");
    const double im = std::log(std::abs(m->gamma));
    return make_set({cplx{-kPi / 2.0, im}, cplx{kPi / 2.0, im}});
  }
  return hopping_general(*center_hoppings(model));
}

PoleSet solve_poles_numeric(const CenterModel& model) {
  std::vector<cplx> coeffs = pole_polynomial(model);
  PoleSet set;
  set.nominal_degree = static_cast<int>(coeffs.size()) - 1;

  double scale = 0.0;
  for (const cplx& c : coeffs) scale = std::max(scale, std::abs(c));
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-14 * scale) coeffs.pop_back();
  // Roots at z = 0 carry no k.
  while (coeffs.size() > 1 && std::abs(coeffs.front()) <= 1e-14 * scale) {
    coeffs.erase(coeffs.begin());
  }
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree < 1) return set;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw ComputationError("companion-matrix eigensolver did not converge");
  }

  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const cplx z = solver.eigenvalues()(i);
    if (z == cplx{}) continue;
    cplx k = -kI * std::log(z);
    double residual = std::abs(pole_equation_value(model, k));
    for (int iter = 0; iter < 3 && residual > 0.0; ++iter) {
      const cplx d = pole_equation_derivative(model, k);
      if (d == cplx{}) break;
      const cplx next = k - pole_equation_value(model, k) / d;
      const double next_residual = std::abs(pole_equation_value(model, next));
      if (!(next_residual < residual)) break;
      k = next;
      residual = next_residual;
    }
    set.poles.push_back(Pole{normalize_branch(k)});
  }
  sort_poles(set.poles);
  return set;
}

PoleSet solve_poles(const CenterModel& model) {
  try {
    return solve_poles_analytic(model);
  } catch (const PolesAtInfinity&) {
    PoleSet empty;
    empty.nominal_degree = static_cast<int>(pole_polynomial(model).size()) - 1;
    return empty;
  }
}

namespace {

// Reorders `next` so that next[i] continues prev[i]; extra or missing poles
// keep their sorted position.
std::vector<Pole> match_poles(const std::vector<Pole>& prev, std::vector<Pole> next) {
  const size_t n = prev.size();
  if (n == 0 || n != next.size() || n > 8) return next;
  std::vector<size_t> perm(n), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (size_t i = 0; i < n; ++i) cost += std::abs(prev[i].k - next[perm[i]].k);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<Pole> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = next[best[i]];
  return out;
}

bool has_growing_pole(const CenterModel& model) {
  const PoleSet set = solve_poles(model);
  return std::any_of(set.poles.begin(), set.poles.end(),
                     [](const Pole& p) { return in_open_first_quadrant(p.k); });
}

}  // namespace

PoleTrajectory trace_pole_trajectory(const CenterModel& base, std::span<const double> grid) {
  PoleTrajectory out;
  out.family = family_of(base);
  out.parameter = std::string(swept_parameter_name(out.family));
  out.grid.assign(grid.begin(), grid.end());
  out.poles.reserve(grid.size());
  for (double value : grid) {
    std::vector<Pole> poles = solve_poles(with_swept_parameter(base, value)).poles;
    if (!out.poles.empty()) poles = match_poles(out.poles.back(), std::move(poles));
    out.poles.push_back(std::move(poles));
  }
  return out;
}

CriticalPoint critical_gamma(const CenterModel& model, const CriticalSearch& search) {
  if (!(search.upper > search.lower) || search.scan_points < 2) {
    throw std::invalid_argument("critical_gamma: empty search range");
  }
  auto growing_at = [&](double g) { return has_growing_pole(with_swept_parameter(model, g)); };

  CriticalPoint result;
  if (growing_at(search.lower)) {
    result.gamma = search.lower;
    result.zero_threshold = true;
    return result;
  }
  const double step = (search.upper - search.lower) / (search.scan_points - 1);
  double lo = search.lower;
  double hi = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i < search.scan_points; ++i) {
    const double g = search.lower + step * i;
    if (growing_at(g)) {
      hi = g;
      break;
    }
    lo = g;
  }
  if (std::isnan(hi)) {
    throw NoCriticalPoint("no critical point in range [" + std::to_string(search.lower) + ", " +
                          std::to_string(search.upper) + "] for " + describe(model));
  }
  // Invariant: no growing pole at lo, a growing pole at hi.
  while (hi - lo > search.tolerance && result.bisection_steps < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (growing_at(mid) ? hi : lo) = mid;
    ++result.bisection_steps;
  }
  result.gamma = hi;
  result.zero_threshold = hi - search.lower <= 1e-10;
  return result;
}

Verdict validity_verdict(const CenterModel& model) {
  Verdict v;
  v.all_poles = solve_poles(model).poles;
  for (const Pole& p : v.all_poles) {
    const PoleClass c = p.kind();
    if (c == PoleClass::GrowingBound || (in_open_first_quadrant(p.k) &&
                                         c != PoleClass::SpectralSingularity)) {
      v.offending_poles.push_back(p);
    } else if (c == PoleClass::SpectralSingularity) {
      v.spectral_singularities.push_back(p);
    }
  }
  v.valid = v.offending_poles.empty() && v.spectral_singularities.empty();

  const double param = swept_parameter(model);
  CriticalSearch search;
  search.upper = std::max(3.0, 2.0 * std::abs(param) + 1.0);
  search.scan_points = static_cast<int>(search.upper * 100.0) + 1;
  try {
    v.critical_value = critical_gamma(model, search).gamma;
    v.gamma_margin = param - *v.critical_value;
  } catch (const NoCriticalPoint&) {
  }
  return v;
}

}  // namespace nhscat
