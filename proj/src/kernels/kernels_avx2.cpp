#include <immintrin.h>

#include "kernel_impl.hpp"

namespace nhscat::kernels::detail {

namespace {

// Two complex doubles per register, stored (re0, im0, re1, im1).
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d broadcast(cplx c) { return _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag()); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

void tridiag_apply(const cplx* diag, const cplx* lower, const cplx* upper, const cplx* x, cplx* y,
                   cplx scale, std::size_t n) {
  if (n < 4) {
    scalar_table().tridiag_apply(diag, lower, upper, x, y, scale, n);
    return;
  }
  const __m256d s = broadcast(scale);
  y[0] = scale * (diag[0] * x[0] + upper[0] * x[1]);
  std::size_t i = 1;
  for (; i + 2 < n; i += 2) {
    __m256d acc = cmul(load2(lower + i - 1), load2(x + i - 1));
    acc = _mm256_add_pd(acc, cmul(load2(diag + i), load2(x + i)));
    acc = _mm256_add_pd(acc, cmul(load2(upper + i), load2(x + i + 1)));
    store2(y + i, cmul(acc, s));
  }
  for (; i + 1 < n; ++i) {
    y[i] = scale * (lower[i - 1] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1]);
  }
  y[n - 1] = scale * (lower[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1]);
}

void axpy(cplx a, const cplx* x, const cplx* y, cplx* out, std::size_t n) {
  const __m256d av = broadcast(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, _mm256_add_pd(load2(y + i), cmul(load2(x + i), av)));
  for (; i < n; ++i) out[i] = y[i] + a * x[i];
}

double norm2(const cplx* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = load2(x + i);
    const __m256d v1 = load2(x + i + 2);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void gemv(const cplx* a, std::size_t rows, std::size_t cols, const cplx* w, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = 0.0;
  std::size_t c = 0;
  // Two columns per sweep over y halves the load/store traffic on y.
  for (; c + 2 <= cols; c += 2) {
    const __m256d w0 = broadcast(w[c]);
    const __m256d w1 = broadcast(w[c + 1]);
    const cplx* col0 = a + c * rows;
    const cplx* col1 = col0 + rows;
    std::size_t r = 0;
    for (; r + 2 <= rows; r += 2) {
      __m256d acc = load2(y + r);
      acc = _mm256_add_pd(acc, cmul(load2(col0 + r), w0));
      acc = _mm256_add_pd(acc, cmul(load2(col1 + r), w1));
      store2(y + r, acc);
    }
    for (; r < rows; ++r) y[r] += w[c] * col0[r] + w[c + 1] * col1[r];
  }
  for (; c < cols; ++c) {
    const __m256d wv = broadcast(w[c]);
    const cplx* col = a + c * rows;
    std::size_t r = 0;
    for (; r + 2 <= rows; r += 2) store2(y + r, _mm256_add_pd(load2(y + r), cmul(load2(col + r), wv)));
    for (; r < rows; ++r) y[r] += w[c] * col[r];
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{tridiag_apply, axpy, norm2, gemv};
  return table;
}

}  // namespace nhscat::kernels::detail
