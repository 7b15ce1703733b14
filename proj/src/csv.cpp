#include "nhscat/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace nhscat::csv {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Writer::Writer(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
  for (std::string_view h : header) field(h);
  end_row();
}

Writer& Writer::field(double value) { return field(std::string_view(format_double(value))); }

Writer& Writer::field(long long value) { return field(std::string_view(std::to_string(value))); }

Writer& Writer::field(std::string_view value) {
  if (written_ > 0) out_ << ',';
  out_ << value;
  ++written_;
  return *this;
}

void Writer::end_row() {
  if (written_ != columns_) throw std::logic_error("csv row has the wrong number of fields");
  out_ << '\n';
  written_ = 0;
}

void write_scatter(std::ostream& out, std::span<const Amplitudes> rows) {
  Writer w(out, {"k", "R_L", "T_L", "R_R", "T_R"});
  for (const Amplitudes& a : rows) {
    const Coefficients c = coefficients(a);
    w.field(a.k).field(c.R_left).field(c.T_left).field(c.R_right).field(c.T_right).end_row();
  }
}

void write_trajectory(std::ostream& out, const PoleTrajectory& trajectory) {
  Writer w(out, {"param", "pole_index", "re_k", "im_k", "re_E", "im_E", "class"});
  for (std::size_t i = 0; i < trajectory.grid.size(); ++i) {
    for (std::size_t n = 0; n < trajectory.poles[i].size(); ++n) {
      const Pole& p = trajectory.poles[i][n];
      const cplx e = p.energy();
      w.field(trajectory.grid[i])
          .field(static_cast<long long>(n))
          .field(p.k.real())
          .field(p.k.imag())
          .field(e.real())
          .field(e.imag())
          .field(pole_class_name(p.kind()))
          .end_row();
    }
  }
}

void write_timeseries(std::ostream& out, const EvolutionResult& result) {
  Writer w(out, {"t", "total_intensity", "R_L", "T_L"});
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    w.field(result.times[i])
        .field(result.total_intensity[i])
        .field(result.reflected[i])
        .field(result.transmitted[i])
        .end_row();
  }
}

void write_snapshot(std::ostream& out, std::span<const cplx> snapshot, const LatticeSpec& lattice) {
  Writer w(out, {"j", "abs2", "re", "im"});
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    w.field(lattice.site_of(static_cast<int>(i)))
        .field(std::norm(snapshot[i]))
        .field(snapshot[i].real())
        .field(snapshot[i].imag())
        .end_row();
  }
}

void write_eigenvalues(std::ostream& out, const SpectrumResult& spectrum) {
  Writer w(out, {"n", "re_E", "im_E", "participation_ratio"});
  for (Eigen::Index n = 0; n < spectrum.size(); ++n) {
    const Eigen::VectorXcd psi = spectrum.right.col(n);
    w.field(static_cast<long long>(n))
        .field(spectrum.eigenvalues(n).real())
        .field(spectrum.eigenvalues(n).imag())
        .field(participation_ratio({psi.data(), static_cast<std::size_t>(psi.size())}))
        .end_row();
  }
}

void write_profile(std::ostream& out, std::span<const cplx> state, const LatticeSpec& lattice) {
  Writer w(out, {"j", "re_psi", "im_psi", "abs2"});
  for (std::size_t i = 0; i < state.size(); ++i) {
    w.field(lattice.site_of(static_cast<int>(i)))
        .field(state[i].real())
        .field(state[i].imag())
        .field(std::norm(state[i]))
        .end_row();
  }
}

void write_sweep(std::ostream& out, const SweepReport& report) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  Writer w(out, {"param", "R_L_ti", "T_L_ti", "R_L_td", "T_L_td", "valid", "n_growing_poles",
                 "diverged"});
  for (const SweepRow& r : report.rows) {
    w.field(r.param)
        .field(r.ti ? r.ti->R_left : nan)
        .field(r.ti ? r.ti->T_left : nan)
        .field(r.td ? r.td->R_left : nan)
        .field(r.td ? r.td->T_left : nan)
        .field(r.valid ? 1 : 0)
        .field(r.growing_poles)
        .field(r.diverged ? 1 : 0)
        .end_row();
  }
}

}  // namespace nhscat::csv
