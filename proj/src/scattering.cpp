#include "nhscat/scattering.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nhscat/error.hpp"

namespace nhscat {

namespace {

constexpr cplx kI{0.0, 1.0};

// Numerators of (r_L, t_L, r_R, t_R) over the shared denominator, and their
// k-derivatives for the band-edge limits.
struct ClosedForm {
  std::array<cplx, 4> numerators;
  cplx denominator;
  std::array<cplx, 4> d_numerators;
  cplx d_denominator;
};

ClosedForm onsite_form(const ImaginaryOnsite& m, double k) {
  const double g0 = m.gamma0;
  const double g1 = m.gamma1;
  const cplx z = std::exp(kI * k);
  const cplx zi = 1.0 / z;
  ClosedForm f;
  f.denominator = g0 - g1 + kI * g0 * g1 * z + 2.0 * std::sin(k);
  f.numerators[0] = -g0 + g1 * z * z - kI * g0 * g1 * z;
  f.numerators[1] = 2.0 * std::sin(k);
  f.numerators[2] = -g0 + g1 * zi * zi - kI * g0 * g1 * zi;
  f.numerators[3] = f.numerators[1];
  f.d_denominator = -g0 * g1 * z + 2.0 * std::cos(k);
  f.d_numerators[0] = kI * z * (2.0 * g1 * z - kI * g0 * g1);
  f.d_numerators[1] = 2.0 * std::cos(k);
  f.d_numerators[2] = -kI * zi * (2.0 * g1 * zi - kI * g0 * g1);
  f.d_numerators[3] = f.d_numerators[1];
  return f;
}

ClosedForm hopping_form(const Hoppings& h, double k) {
  const cplx p = h.left * h.right;
  const cplx w = std::exp(2.0 * kI * k);
  ClosedForm f;
  f.denominator = 1.0 - p * w;
  f.numerators[0] = (p - 1.0) * w;
  f.numerators[1] = h.right * (w - 1.0);
  f.numerators[2] = p - 1.0;
  f.numerators[3] = h.left * (w - 1.0);
  f.d_denominator = -2.0 * kI * p * w;
  f.d_numerators[0] = 2.0 * kI * (p - 1.0) * w;
  f.d_numerators[1] = 2.0 * kI * h.right * w;
  f.d_numerators[2] = 0.0;
  f.d_numerators[3] = 2.0 * kI * h.left * w;
  return f;
}

ClosedForm closed_form(const CenterModel& model, double k) {
  if (const auto* onsite = std::get_if<ImaginaryOnsite>(&model)) return onsite_form(*onsite, k);
  return hopping_form(*center_hoppings(model), k);
}

std::string divergence_message(double k) {
  return "amplitudes divergent at real k = " + std::to_string(k) + " (spectral singularity)";
}

// Coupling H(j, m) of the infinite chain with the center at j = 0, 1.
cplx chain_entry(const CenterBlock& c, int j, int m) {
  if ((j == 0 || j == 1) && (m == 0 || m == 1)) return c.block(j, m);
  if ((j == -1 && m == 0) || (j == 0 && m == -1)) return c.left_lead_coupling;
  if ((j == 1 && m == 2) || (j == 2 && m == 1)) return c.right_lead_coupling;
  if (std::abs(j - m) == 1) return -1.0;
  return 0.0;
}

}  // namespace

Coefficients coefficients(const Amplitudes& a) {
  return Coefficients{std::norm(a.r_left), std::norm(a.t_left), std::norm(a.r_right),
                      std::norm(a.t_right)};
}

cplx amplitude_denominator(const CenterModel& model, cplx k) {
  if (const auto* m = std::get_if<ImaginaryOnsite>(&model)) {
    return m->gamma0 - m->gamma1 + kI * m->gamma0 * m->gamma1 * std::exp(kI * k) +
           2.0 * std::sin(k);
  }
  const Hoppings h = *center_hoppings(model);
  return 1.0 - h.left * h.right * std::exp(2.0 * kI * k);
}

Amplitudes amplitudes_closed_form(const CenterModel& model, double k) {
  if (!(k >= 0.0 && k <= std::numbers::pi)) {
    throw std::invalid_argument("wave number must lie in [0, pi], got " + std::to_string(k));
  }
  const ClosedForm f = closed_form(model, k);
  std::array<cplx, 4> values{};
  if (std::abs(f.denominator) >= kDivergenceThreshold) {
    for (size_t i = 0; i < 4; ++i) values[i] = f.numerators[i] / f.denominator;
  } else {
    // Only a band-edge 0/0 has a finite limit; anywhere else this is a pole.
    const bool band_edge = k == 0.0 || k == std::numbers::pi;
    bool all_vanish = true;
    for (const cplx& n : f.numerators) all_vanish = all_vanish && std::abs(n) < kDivergenceThreshold;
    if (!band_edge || !all_vanish || std::abs(f.d_denominator) < kDivergenceThreshold) {
      throw DivergentAmplitudes(divergence_message(k));
    }
    for (size_t i = 0; i < 4; ++i) values[i] = f.d_numerators[i] / f.d_denominator;
  }
  return Amplitudes{k, values[0], values[1], values[2], values[3]};
}

Amplitudes amplitudes_numeric(const CenterModel& model, double k,
                              const NumericScatteringOptions& options) {
  if (!(k > 0.0 && k < std::numbers::pi)) {
    throw std::invalid_argument("numeric amplitudes need 0 < k < pi, got " + std::to_string(k));
  }
  const int n = options.window_sites;
  if (n < 6) throw std::invalid_argument("scattering window needs at least 6 sites");

  const int left_sites = (n - 2) / 2;
  const int jmin = -left_sites;
  const int jmax = jmin + n - 1;
  const CenterBlock center = build_center(model);
  const cplx energy = dispersion(k);
  auto wave = [k](int j, double sign) { return std::exp(sign * kI * k * static_cast<double>(j)); };

  // Unknowns: psi(jmin..jmax), then the reflected and transmitted amplitudes.
  const int dim = n + 2;
  const int r_col = n;
  const int t_col = n + 1;

  // incident_sign = +1 for a wave arriving from the left, -1 from the right.
  auto solve = [&](double incident_sign) -> std::pair<cplx, cplx> {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
    int row = 0;
    for (int j = jmin + 1; j <= jmax - 1; ++j, ++row) {
      for (int m = j - 1; m <= j + 1; ++m) a(row, m - jmin) += chain_entry(center, j, m);
      a(row, j - jmin) -= energy;
    }
    const std::array<int, 2> incident_sites =
        incident_sign > 0 ? std::array<int, 2>{jmin, jmin + 1} : std::array<int, 2>{jmax - 1, jmax};
    const std::array<int, 2> outgoing_sites =
        incident_sign > 0 ? std::array<int, 2>{jmax - 1, jmax} : std::array<int, 2>{jmin, jmin + 1};
    for (int j : incident_sites) {
      // psi(j) - r * e^{-i s k j} = e^{i s k j}
      a(row, j - jmin) = 1.0;
      a(row, r_col) = -wave(j, -incident_sign);
      b(row) = wave(j, incident_sign);
      ++row;
    }
    for (int j : outgoing_sites) {
      a(row, j - jmin) = 1.0;
      a(row, t_col) = -wave(j, incident_sign);
      ++row;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond >= options.min_rcond)) {
      throw SingularSystem("scattering window system is near-singular at k = " +
                               std::to_string(k) + " (rcond " + std::to_string(rcond) + ")",
                           rcond);
    }
    const Eigen::VectorXcd x = lu.solve(b);
    return {x(r_col), x(t_col)};
  };

  const auto [r_left, t_left] = solve(+1.0);
  const auto [r_right, t_right] = solve(-1.0);
  return Amplitudes{k, r_left, t_left, r_right, t_right};
}

Eigen::Matrix2cd s_matrix(const Amplitudes& a) {
  Eigen::Matrix2cd s;
  s << a.r_left, a.t_right,  //
      a.t_left, a.r_right;
  return s;
}

Eigen::Matrix2cd s_matrix(const CenterModel& model, double k) {
  return s_matrix(amplitudes_closed_form(model, k));
}

}  // namespace nhscat
