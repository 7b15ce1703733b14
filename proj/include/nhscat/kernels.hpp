#pragma once

// Inner loops of the propagators over interleaved complex<double> arrays.
// Every kernel has a scalar reference and, where the CPU supports it, an AVX2
// variant; the widest supported variant is picked at first use.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace nhscat::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa best_isa();
Isa active_isa();
/// Throws std::invalid_argument when the CPU or the build lacks the ISA.
void set_active_isa(Isa isa);

struct KernelTable {
  // y[i] = scale * (lower[i-1] x[i-1] + diag[i] x[i] + upper[i] x[i+1])
  void (*tridiag_apply)(const cplx* diag, const cplx* lower, const cplx* upper, const cplx* x,
                        cplx* y, cplx scale, std::size_t n);
  // out[i] = y[i] + a * x[i]; out may alias y
  void (*axpy)(cplx a, const cplx* x, const cplx* y, cplx* out, std::size_t n);
  // sum of |x[i]|^2
  double (*norm2)(const cplx* x, std::size_t n);
  // y = A w with A column-major, rows x cols
  void (*gemv)(const cplx* a, std::size_t rows, std::size_t cols, const cplx* w, cplx* y);
};

const KernelTable& table(Isa isa);

// Bounds-checked entry points using the active table.
void tridiag_apply(std::span<const cplx> diag, std::span<const cplx> lower,
                   std::span<const cplx> upper, std::span<const cplx> x, std::span<cplx> y,
                   cplx scale);
void axpy(cplx a, std::span<const cplx> x, std::span<const cplx> y, std::span<cplx> out);
double norm2(std::span<const cplx> x);
void gemv(std::span<const cplx> a, std::size_t rows, std::size_t cols, std::span<const cplx> w,
          std::span<cplx> y);

}  // namespace nhscat::kernels
