#include "kernel_impl.hpp"

namespace nhscat::kernels::detail {

namespace {

void tridiag_apply(const cplx* diag, const cplx* lower, const cplx* upper, const cplx* x, cplx* y,
                   cplx scale, std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    y[0] = scale * (diag[0] * x[0]);
    return;
  }
  y[0] = scale * (diag[0] * x[0] + upper[0] * x[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = scale * (lower[i - 1] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1]);
  }
  y[n - 1] = scale * (lower[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1]);
}

void axpy(cplx a, const cplx* x, const cplx* y, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + a * x[i];
}

double norm2(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void gemv(const cplx* a, std::size_t rows, std::size_t cols, const cplx* w, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    const cplx wc = w[c];
    const cplx* col = a + c * rows;
    for (std::size_t r = 0; r < rows; ++r) y[r] += wc * col[r];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{tridiag_apply, axpy, norm2, gemv};
  return table;
}

}  // namespace nhscat::kernels::detail
