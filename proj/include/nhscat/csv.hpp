#pragma once

// CSV emission: comma-separated, one header row, LF line endings, doubles
// with 17 significant digits.

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nhscat/analysis.hpp"
#include "nhscat/dynamics.hpp"
#include "nhscat/poles.hpp"
#include "nhscat/scattering.hpp"
#include "nhscat/spectrum.hpp"

namespace nhscat::csv {

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double value);

class Writer {
 public:
  Writer(std::ostream& out, std::initializer_list<std::string_view> header);

  Writer& field(double value);
  Writer& field(long long value);
  Writer& field(int value) { return field(static_cast<long long>(value)); }
  Writer& field(std::string_view value);
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t written_ = 0;
};

void write_scatter(std::ostream& out, std::span<const Amplitudes> rows);
void write_trajectory(std::ostream& out, const PoleTrajectory& trajectory);
void write_timeseries(std::ostream& out, const EvolutionResult& result);
void write_snapshot(std::ostream& out, std::span<const cplx> snapshot, const LatticeSpec& lattice);
void write_eigenvalues(std::ostream& out, const SpectrumResult& spectrum);
void write_profile(std::ostream& out, std::span<const cplx> state, const LatticeSpec& lattice);
void write_sweep(std::ostream& out, const SweepReport& report);

}  // namespace nhscat::csv
