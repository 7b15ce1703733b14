#pragma once

// Reference computations written from the model definitions alone, without
// calling into the library code they check.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nhscat/model.hpp"

namespace nhscat::testing {

inline constexpr cplx kI{0.0, 1.0};

/// Center entries [H00, H01, H10, H11] straight from the parameter definitions.
inline std::array<cplx, 4> center_entries(const CenterModel& model) {
  if (const auto* m = std::get_if<ImaginaryOnsite>(&model)) {
    return {-kI * m->gamma0, -1.0, -1.0, kI * m->gamma1};
  }
  cplx kl, kr;
  if (const auto* m = std::get_if<UnequalHopping>(&model)) {
    kl = m->kappa + m->gamma;
    kr = m->kappa - m->gamma;
  } else if (const auto* m = std::get_if<ComplexHopping>(&model)) {
    kl = kr = cplx{m->kappa, m->gamma};
  } else if (const auto* m = std::get_if<AntiHermitianHopping>(&model)) {
    kr = cplx{m->kappa, m->gamma};
    kl = cplx{-m->kappa, m->gamma};
  } else {
    kl = kr = cplx{0.0, std::get<ImaginaryCoupling>(model).gamma};
  }
  return {0.0, kl, kr, 0.0};
}

/// Dense L x L matrix assembled site by site.
inline Eigen::MatrixXcd dense_hamiltonian(const CenterModel& model, int sites) {
  const int first = -(sites - 2) / 2;
  const auto c = center_entries(model);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(sites, sites);
  for (int i = 0; i + 1 < sites; ++i) h(i, i + 1) = h(i + 1, i) = -1.0;
  const int i0 = -first;
  h(i0, i0) = c[0];
  h(i0, i0 + 1) = c[1];
  h(i0 + 1, i0) = c[2];
  h(i0 + 1, i0 + 1) = c[3];
  return h;
}

struct OracleAmplitudes {
  cplx r_left, t_left, r_right, t_right;
};

/// Transfer-matrix march through the two center sites. Needs H01 and H10 nonzero.
inline OracleAmplitudes transfer_amplitudes(const CenterModel& model, double k) {
  const auto c = center_entries(model);
  const cplx e = -2.0 * std::cos(k);
  const cplx z = std::exp(kI * k);

  // Left incidence: psi_j = z^j + r z^-j for j <= 0; march to sites 1 and 2.
  auto forward = [&](cplx psi_m1, cplx psi_0) {
    const cplx psi_1 = ((e - c[0]) * psi_0 + psi_m1) / c[1];
    const cplx psi_2 = c[2] * psi_0 + (c[3] - e) * psi_1;
    return std::array<cplx, 2>{psi_1, psi_2};
  };
  const auto a = forward(1.0 / z, 1.0);
  const auto b = forward(z, 1.0);
  const cplx r_left = -(a[1] - z * a[0]) / (b[1] - z * b[0]);
  const cplx t_left = (a[0] + r_left * b[0]) / z;

  // Right incidence: psi_j = z^-j + r z^j for j >= 1; march back to sites 0 and -1.
  auto backward = [&](cplx psi_1, cplx psi_2) {
    const cplx psi_0 = ((e - c[3]) * psi_1 + psi_2) / c[2];
    const cplx psi_m1 = c[1] * psi_1 + (c[0] - e) * psi_0;
    return std::array<cplx, 2>{psi_0, psi_m1};
  };
  const auto p = backward(1.0 / z, 1.0 / (z * z));
  const auto q = backward(z, z * z);
  // outgoing to the left: psi_-1 = z psi_0
  const cplx r_right = -(p[1] - z * p[0]) / (q[1] - z * q[0]);
  const cplx t_right = p[0] + r_right * q[0];
  return {r_left, t_left, r_right, t_right};
}

/// Pole wave numbers from the quadratic formula in z = e^{ik}.
inline std::vector<cplx> quadratic_poles(const CenterModel& model) {
  std::vector<cplx> zs;
  if (const auto* m = std::get_if<ImaginaryOnsite>(&model)) {
    // i(g0 g1 - 1) z^2 + (g0 - g1) z + i = 0
    const cplx a = kI * (m->gamma0 * m->gamma1 - 1.0);
    const cplx b = m->gamma0 - m->gamma1;
    const cplx c = kI;
    if (std::abs(a) < 1e-14) {
      if (std::abs(b) > 0.0) zs.push_back(-c / b);
    } else {
      const cplx d = std::sqrt(b * b - 4.0 * a * c);
      zs.push_back((-b + d) / (2.0 * a));
      zs.push_back((-b - d) / (2.0 * a));
    }
  } else {
    const auto c = center_entries(model);
    const cplx p = c[1] * c[2];
    if (std::abs(p) > 0.0) {
      const cplx z = 1.0 / std::sqrt(p);
      zs.push_back(z);
      zs.push_back(-z);
    }
  }
  std::vector<cplx> ks;
  for (cplx z : zs) ks.push_back(-kI * std::log(z));
  return ks;
}

/// Exact propagation by the dense matrix exponential.
inline Eigen::VectorXcd exact_evolution(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                                        double t) {
  const Eigen::MatrixXcd u = (cplx{0.0, -t} * h).exp();
  return u * psi0;
}

/// Distance between k values modulo 2 pi in the real part.
inline double branch_distance(cplx a, cplx b) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double dr = std::remainder(a.real() - b.real(), two_pi);
  return std::hypot(dr, a.imag() - b.imag());
}

/// Smallest total distance between two pole lists of equal length (up to 2).
inline double set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return INFINITY;
  if (a.size() == 1) return branch_distance(a[0], b[0]);
  if (a.empty()) return 0.0;
  const double straight = std::max(branch_distance(a[0], b[0]), branch_distance(a[1], b[1]));
  const double crossed = std::max(branch_distance(a[0], b[1]), branch_distance(a[1], b[0]));
  return std::min(straight, crossed);
}

}  // namespace nhscat::testing
