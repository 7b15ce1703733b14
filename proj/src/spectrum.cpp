#include "nhscat/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <lapacke.h>

#include "nhscat/error.hpp"
#include "nhscat/fit.hpp"
#include "nhscat/parallel.hpp"

namespace nhscat {

SpectrumResult eigendecompose(const HamiltonianMatrix& hamiltonian, const SpectrumOptions& options) {
  const auto& h = hamiltonian.matrix;
  if (h.rows() > options.max_sites) {
    throw std::invalid_argument("matrix size " + std::to_string(h.rows()) +
                                " exceeds the eigensolver cap " +
                                std::to_string(options.max_sites));
  }
  if (!h.allFinite()) throw std::invalid_argument("Hamiltonian has non-finite entries");

  const Eigen::Index n = h.rows();
  Eigen::MatrixXcd work = h;
  Eigen::VectorXcd values(n);
  Eigen::MatrixXcd vectors(n, n);
  lapack_complex_double unused_left;
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double*>(work.data()), static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double*>(values.data()), &unused_left, 1,
      reinterpret_cast<lapack_complex_double*>(vectors.data()), static_cast<lapack_int>(n));
  if (info != 0) {
    throw ComputationError("eigensolver did not converge (zgeev info " + std::to_string(info) +
                           ")");
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });

  SpectrumResult out{hamiltonian.lattice, Eigen::VectorXcd(n), Eigen::MatrixXcd(n, n),
                     Eigen::MatrixXcd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = values(order[static_cast<size_t>(i)]);
    out.right.col(i) = vectors.col(order[static_cast<size_t>(i)]).normalized();
  }

  // Rows of V^{-1} are the conjugated left eigenvectors, already biorthonormal.
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.right);
  const Eigen::MatrixXcd inverse = lu.inverse();
  out.left = inverse.adjoint();

  double min_overlap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = out.left.col(i).norm();
    // a singular V leaves inf or nan in the inverse
    min_overlap = std::min(min_overlap, std::isfinite(norm) && norm > 0.0 ? 1.0 / norm : 0.0);
  }
  out.min_self_overlap = min_overlap;
  out.near_exceptional = !(min_overlap >= options.exceptional_threshold);
  return out;
}

double participation_ratio(std::span<const cplx> amplitudes) {
  double s2 = 0.0, s4 = 0.0;
  for (const cplx& a : amplitudes) {
    const double p = std::norm(a);
    s2 += p;
    s4 += p * p;
  }
  return s4 > 0.0 ? s2 * s2 / s4 : 0.0;
}

DecayFit fit_decay_profile(std::span<const cplx> amplitudes, const LatticeSpec& lattice) {
  if (static_cast<int>(amplitudes.size()) != lattice.sites()) {
    throw std::invalid_argument("profile length does not match the lattice");
  }
  constexpr int kInnermost = 5;
  double peak = 0.0;
  for (const cplx& a : amplitudes) peak = std::max(peak, std::norm(a));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * peak;

  std::vector<double> xl, yl, xr, yr;
  DecayFit fit;
  for (int j = -kInnermost; lattice.contains(j); --j) {
    const double p = std::norm(amplitudes[static_cast<size_t>(lattice.index_of(j))]);
    if (!(p > floor)) break;
    xl.push_back(-j);
    yl.push_back(std::log(p));
    fit.outermost_left = -j;
  }
  for (int j = kInnermost; lattice.contains(j); ++j) {
    const double p = std::norm(amplitudes[static_cast<size_t>(lattice.index_of(j))]);
    if (!(p > floor)) break;
    xr.push_back(j);
    yr.push_back(std::log(p));
    fit.outermost_right = j;
  }
  if (xl.size() < 2 || xr.size() < 2) {
    throw FitFailure("decay fit window has fewer than 2 sites on a lead");
  }
  const SharedSlopeFit line = fit_shared_slope(xl, yl, xr, yr);
  fit.alpha = -line.slope / 2.0;
  fit.alpha_stderr = line.slope_stderr / 2.0;
  fit.r_squared = line.r_squared;
  fit.innermost = kInnermost;
  return fit;
}

std::vector<BoundStateReport> detect_bound_states(const SpectrumResult& spectrum, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("bound-state threshold must be positive");
  std::vector<BoundStateReport> out;
  for (Eigen::Index n = 0; n < spectrum.size(); ++n) {
    if (!(spectrum.eigenvalues(n).imag() > threshold)) continue;
    BoundStateReport report;
    report.index = n;
    report.energy = spectrum.eigenvalues(n);
    const Eigen::VectorXcd psi = spectrum.right.col(n);
    const std::span<const cplx> profile(psi.data(), static_cast<size_t>(psi.size()));
    Eigen::Index peak = 0;
    psi.cwiseAbs2().maxCoeff(&peak);
    report.center_site = spectrum.lattice.site_of(static_cast<int>(peak));
    report.participation_ratio = participation_ratio(profile);
    try {
      DecayFit fit = fit_decay_profile(profile, spectrum.lattice);
      if (fit.alpha > 0.0 && fit.r_squared >= kMinDecayRSquared) {
        report.decay = fit;
      } else {
        report.diagnostic = "profile is not exponentially localized (R^2 = " +
                            std::to_string(fit.r_squared) + ")";
      }
    } catch (const FitFailure& e) {
      report.diagnostic = e.what();
    }
    out.push_back(std::move(report));
  }
  return out;
}

ScalingTable finite_size_scaling(const CenterModel& model, std::span<const int> sizes,
                                 double threshold, int threads) {
  if (sizes.size() < 3) throw std::invalid_argument("finite-size scaling needs at least 3 sizes");
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw std::invalid_argument("sizes must be ascending");
  }
  for (int s : sizes) (void)LatticeSpec(s);  // throws on invalid sizes

  ScalingTable table;
  table.rows.resize(sizes.size());
  parallel_for(sizes.size(), threads, [&](size_t i) {
    const SpectrumResult spec =
        eigendecompose(build_finite_hamiltonian(model, LatticeSpec{sizes[i]}));
    ScalingRow row;
    row.sites = sizes[i];
    row.max_continuum_imag = -std::numeric_limits<double>::infinity();
    for (Eigen::Index n = 0; n < spec.size(); ++n) {
      const cplx e = spec.eigenvalues(n);
      if (e.imag() > threshold) {
        row.bound_energies.push_back(e);
      } else {
        row.max_continuum_imag = std::max(row.max_continuum_imag, e.imag());
      }
    }
    table.rows[i] = std::move(row);
  });

  constexpr double kZero = 1e-12;
  const bool all_tiny = std::all_of(table.rows.begin(), table.rows.end(), [](const ScalingRow& r) {
    return r.max_continuum_imag < kZero;
  });
  if (all_tiny) {
    table.exact_zero = true;
    return table;
  }
  std::vector<double> lx, ly;
  for (const ScalingRow& r : table.rows) {
    if (r.max_continuum_imag <= kZero) continue;
    lx.push_back(std::log(static_cast<double>(r.sites)));
    ly.push_back(std::log(r.max_continuum_imag));
  }
  if (lx.size() >= 3) {
    const LinearFit fit = fit_line(lx, ly);
    table.exponent = fit.slope;
    table.exponent_stderr = fit.slope_stderr;
  }
  return table;
}

}  // namespace nhscat
