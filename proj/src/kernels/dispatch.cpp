#include <atomic>
#include <stdexcept>
#include <string>

#include "kernel_impl.hpp"

namespace nhscat::kernels {

namespace {

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(best_isa())};
  return slot;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("kernel argument mismatch: ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(NHSCAT_WITH_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() { return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return static_cast<Isa>(active_slot().load()); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
  }
  active_slot().store(static_cast<int>(isa));
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
  }
#if defined(NHSCAT_WITH_AVX2)
  if (isa == Isa::Avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

void tridiag_apply(std::span<const cplx> diag, std::span<const cplx> lower,
                   std::span<const cplx> upper, std::span<const cplx> x, std::span<cplx> y,
                   cplx scale) {
  const std::size_t n = diag.size();
  require(x.size() == n && y.size() == n, "tridiag vector length");
  require(n == 0 || (lower.size() + 1 == n && upper.size() + 1 == n), "tridiag band length");
  table(active_isa()).tridiag_apply(diag.data(), lower.data(), upper.data(), x.data(), y.data(),
                                    scale, n);
}

void axpy(cplx a, std::span<const cplx> x, std::span<const cplx> y, std::span<cplx> out) {
  require(x.size() == y.size() && out.size() == y.size(), "axpy length");
  table(active_isa()).axpy(a, x.data(), y.data(), out.data(), x.size());
}

double norm2(std::span<const cplx> x) { return table(active_isa()).norm2(x.data(), x.size()); }

void gemv(std::span<const cplx> a, std::size_t rows, std::size_t cols, std::span<const cplx> w,
          std::span<cplx> y) {
  require(a.size() == rows * cols && w.size() == cols && y.size() == rows, "gemv shape");
  table(active_isa()).gemv(a.data(), rows, cols, w.data(), y.data());
}

}  // namespace nhscat::kernels
