#include "nhscat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nhscat/error.hpp"
#include "nhscat/fit.hpp"
#include "nhscat/kernels.hpp"

namespace nhscat {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kTimeMatch = 1e-9;

std::span<const cplx> view(const Eigen::VectorXcd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void record(EvolutionResult& out, double t, const Eigen::VectorXcd& psi) {
  const LatticeSpec& lat = out.lattice;
  const auto all = view(psi);
  const auto left_end = static_cast<std::size_t>(lat.index_of(0));
  const auto right_start = static_cast<std::size_t>(lat.index_of(2));
  const double reflected = kernels::norm2(all.first(left_end));
  const double center = kernels::norm2(all.subspan(left_end, 2));
  const double transmitted = kernels::norm2(all.subspan(right_start));
  out.times.push_back(t);
  out.snapshots.push_back(psi);
  out.reflected.push_back(reflected);
  out.transmitted.push_back(transmitted);
  out.center_intensity.push_back(center);
  out.total_intensity.push_back(reflected + center + transmitted);
}

bool is_hermitian(const Eigen::MatrixXcd& h) { return h == h.adjoint(); }

struct Rk4 {
  const TridiagonalBands& bands;
  Eigen::VectorXcd k1, k2, k3, k4, tmp;

  explicit Rk4(const TridiagonalBands& b)
      : bands(b),
        k1(b.diag.size()),
        k2(b.diag.size()),
        k3(b.diag.size()),
        k4(b.diag.size()),
        tmp(b.diag.size()) {}

  void derivative(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
    kernels::tridiag_apply(view(bands.diag), view(bands.lower), view(bands.upper), view(x),
                           {out.data(), static_cast<std::size_t>(out.size())}, -kI);
  }

  void axpy(double a, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) {
    kernels::axpy(a, view(x), view(y), {out.data(), static_cast<std::size_t>(out.size())});
  }

  void step(Eigen::VectorXcd& y, double dt) {
    derivative(y, k1);
    axpy(0.5 * dt, k1, y, tmp);
    derivative(tmp, k2);
    axpy(0.5 * dt, k2, y, tmp);
    derivative(tmp, k3);
    axpy(dt, k3, y, tmp);
    derivative(tmp, k4);
    axpy(dt / 6.0, k1, y, y);
    axpy(dt / 3.0, k2, y, y);
    axpy(dt / 3.0, k3, y, y);
    axpy(dt / 6.0, k4, y, y);
  }
};

Eigen::VectorXcd run_plain(const TridiagonalBands& bands, Eigen::VectorXcd psi, double dt,
                           double t_end) {
  Rk4 rk(bands);
  const auto steps = static_cast<long>(std::floor(t_end / dt + 1e-9));
  for (long s = 0; s < steps; ++s) rk.step(psi, dt);
  const double rest = t_end - static_cast<double>(steps) * dt;
  if (rest > 1e-12) rk.step(psi, rest);
  return psi;
}

double relative_difference(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale > 0.0 ? (a - b).cwiseAbs().maxCoeff() / scale : 0.0;
}

}  // namespace

WavePacket gaussian_packet(const LatticeSpec& lattice, int j0, double sigma, double k) {
  if (!lattice.contains(j0)) {
    throw std::invalid_argument("packet center " + std::to_string(j0) + " outside the lattice");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("packet width must be positive");

  WavePacket p{lattice, j0, sigma, k, Eigen::VectorXcd(lattice.sites())};
  for (int i = 0; i < lattice.sites(); ++i) {
    const double d = static_cast<double>(lattice.site_of(i) - j0);
    p.amplitudes(i) =
        std::exp(-d * d / (2.0 * sigma * sigma)) * std::exp(kI * (k * lattice.site_of(i)));
  }
  p.amplitudes /= p.amplitudes.norm();
  p.boundary_tail =
      std::max(std::abs(p.amplitudes(0)), std::abs(p.amplitudes(lattice.sites() - 1)));
  p.tail_warning = p.boundary_tail >= 1e-8;
  return p;
}

std::optional<std::size_t> EvolutionResult::find_time(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= kTimeMatch) return i;
  }
  return std::nullopt;
}

std::vector<double> recording_times(double t_end, double every) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  if (!(every > 0.0)) throw std::invalid_argument("recording cadence must be positive");
  std::vector<double> times;
  const auto count = static_cast<long>(std::floor(t_end / every + 1e-9));
  for (long i = 0; i <= count; ++i) times.push_back(static_cast<double>(i) * every);
  if (t_end - times.back() > kTimeMatch) times.push_back(t_end);
  return times;
}

EvolutionResult propagate_eigen(const SpectrumResult& spectrum, const WavePacket& packet,
                                std::span<const double> times) {
  if (spectrum.near_exceptional) {
    throw NearExceptionalPoint(
        "spectrum is near an exceptional point; the eigen-expansion is ill-conditioned, "
        "use propagate_stepper instead");
  }
  if (!(spectrum.lattice == packet.lattice)) {
    throw std::invalid_argument("packet and spectrum lattices differ");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw std::invalid_argument("times must be ascending and non-negative");
    }
  }

  const Eigen::VectorXcd coeffs = spectrum.left.adjoint() * packet.amplitudes;
  const auto n = static_cast<std::size_t>(spectrum.size());
  EvolutionResult out{packet.lattice};
  Eigen::VectorXcd weights(spectrum.size());
  Eigen::VectorXcd psi(spectrum.size());
  const std::span<const cplx> basis(spectrum.right.data(), n * n);
  for (double t : times) {
    if (t == 0.0) {
      record(out, t, packet.amplitudes);
      continue;
    }
    for (Eigen::Index m = 0; m < spectrum.size(); ++m) {
      weights(m) = coeffs(m) * std::exp(-kI * spectrum.eigenvalues(m) * t);
    }
    kernels::gemv(basis, n, n, view(weights), {psi.data(), n});
    record(out, t, psi);
  }
  return out;
}

EvolutionResult propagate_stepper(const HamiltonianMatrix& hamiltonian, const WavePacket& packet,
                                  const StepperOptions& options) {
  if (!(hamiltonian.lattice == packet.lattice)) {
    throw std::invalid_argument("packet and Hamiltonian lattices differ");
  }
  if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::vector<double> times = recording_times(options.t_end, options.record_every);
  const TridiagonalBands bands = tridiagonal_bands(hamiltonian);
  const bool hermitian = is_hermitian(hamiltonian.matrix);

  // Largest dt <= requested that divides the recording cadence.
  double dt = options.record_every / std::ceil(options.record_every / options.dt - 1e-9);
  if (options.auto_refine && options.t_end > 0.0) {
    const double probe = std::min(options.probe_time, options.t_end);
    for (int h = 0; h < options.max_halvings; ++h) {
      const Eigen::VectorXcd coarse = run_plain(bands, packet.amplitudes, dt, probe);
      const Eigen::VectorXcd fine = run_plain(bands, packet.amplitudes, dt / 2.0, probe);
      if (relative_difference(coarse, fine) < options.refine_tolerance) break;
      dt /= 2.0;
    }
  }

  EvolutionResult out{packet.lattice};
  out.dt = dt;
  Rk4 rk(bands);
  Eigen::VectorXcd psi = packet.amplitudes;
  double t = 0.0;
  double prev_norm = psi.squaredNorm();
  bool blown_up = false;
  for (double target : times) {
    if (blown_up) {
      record(out, target,
             Eigen::VectorXcd::Constant(psi.size(), std::numeric_limits<double>::quiet_NaN()));
      continue;
    }
    while (target - t > kTimeMatch) {
      const double h = std::min(dt, target - t);
      rk.step(psi, h);
      t = (target - t - h <= kTimeMatch) ? target : t + h;
      if (hermitian) {
        const double norm = psi.squaredNorm();
        if (!(norm <= 10.0 * prev_norm) || !std::isfinite(norm)) {
          throw StepperInstability("norm jumped from " + std::to_string(prev_norm) + " to " +
                                   std::to_string(norm) + " at t = " + std::to_string(t) +
                                   "; reduce dt (currently " + std::to_string(dt) + ")");
        }
        prev_norm = norm;
      }
    }
    record(out, target, psi);
    if (!psi.allFinite()) blown_up = true;
  }
  return out;
}

PacketCoefficients extract_RT(const EvolutionResult& result, double t) {
  const auto idx = result.find_time(t);
  if (!idx) throw std::invalid_argument("time " + std::to_string(t) + " was not recorded");
  return PacketCoefficients{result.reflected[*idx], result.transmitted[*idx],
                            result.center_intensity[*idx]};
}

std::optional<double> separation_time(const EvolutionResult& result, double ratio) {
  // start looking once the packet has reached the center
  std::size_t peak = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const double frac = result.center_intensity[i] / result.total_intensity[i];
    if (frac > best) {
      best = frac;
      peak = i;
    }
  }
  for (std::size_t i = peak + 1; i < result.times.size(); ++i) {
    if (result.center_intensity[i] < ratio * result.total_intensity[i]) return result.times[i];
  }
  return std::nullopt;
}

GrowthFit fit_growth_rate(const EvolutionResult& result, double t_from, double t_to) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const double t = result.times[i];
    if (t < t_from - kTimeMatch || t > t_to + kTimeMatch) continue;
    const double total = result.total_intensity[i];
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw FitFailure("total intensity not positive and finite at t = " + std::to_string(t));
    }
    x.push_back(t);
    y.push_back(std::log(total));
  }
  if (x.size() < 3) throw FitFailure("growth-fit window holds fewer than 3 recorded times");
  const LinearFit line = fit_line(x, y);
  // An exactly flat log-intensity has no variance to explain; accept it.
  const bool flat = line.residual_sum_squares < 1e-20 * static_cast<double>(x.size());
  if (!(line.r_squared >= kMinGrowthRSquared) && !flat) {
    throw FitFailure("log-intensity is not linear in the window (R^2 = " +
                     std::to_string(line.r_squared) + ")");
  }
  return GrowthFit{line.slope / 2.0, line.slope_stderr / 2.0, line.r_squared, line.points};
}

GrowthFit fit_growth_rate(const EvolutionResult& result) {
  if (result.times.empty()) throw FitFailure("no recorded times");
  const double t_end = result.times.back();
  return fit_growth_rate(result, 0.6 * t_end, t_end);
}

DecayFit fit_spatial_decay(std::span<const cplx> snapshot, const LatticeSpec& lattice) {
  if (static_cast<int>(snapshot.size()) != lattice.sites()) {
    throw std::invalid_argument("snapshot length does not match the lattice");
  }
  const double center = std::max(std::norm(snapshot[lattice.index_of(0)]),
                                 std::norm(snapshot[lattice.index_of(1)]));
  double far = 0.0;
  const int quarter = lattice.sites() / 4;
  for (int i = 0; i < lattice.sites(); ++i) {
    if (std::abs(lattice.site_of(i)) >= quarter) far = std::max(far, std::norm(snapshot[i]));
  }
  if (!(center >= 10.0 * far) || !(center > 0.0)) {
    throw NotLocalized("profile not localized: center intensity is not 10x the far-lead intensity");
  }
  DecayFit fit;
  try {
    fit = fit_decay_profile(snapshot, lattice);
  } catch (const FitFailure& e) {
    throw NotLocalized(std::string("profile not localized: ") + e.what());
  }
  if (!(fit.alpha > 0.0)) throw NotLocalized("profile not localized: intensity does not decay");
  return fit;
}

double probability_current(std::span<const cplx> snapshot, const LatticeSpec& lattice, int j) {
  if (static_cast<int>(snapshot.size()) != lattice.sites()) {
    throw std::invalid_argument("snapshot length does not match the lattice");
  }
  const cplx here = snapshot[lattice.index_of(j)];
  const cplx next = snapshot[lattice.index_of(j + 1)];
  // i (w - w*) with w = psi*(j+1) psi(j)
  return -2.0 * (std::conj(next) * here).imag();
}

}  // namespace nhscat
