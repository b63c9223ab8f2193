// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// runtime CPU check.

#include <immintrin.h>

#include "rigged/kernels.hpp"

namespace rigged::kernels {
namespace {

// std::complex<double> is layout-compatible with double[2]; one __m256d holds
// two complex numbers as [re0 im0 re1 im1].

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx pairing_avx2(const cplx* phi, const cplx* f, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(phi);
  const double* q = reinterpret_cast<const double*>(f);
  // imag = sum (pi*fr - pr*fi): multiply phi by swapped f and flip sign of even lanes
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  __m256d acc_re0 = _mm256_setzero_pd(), acc_re1 = _mm256_setzero_pd();
  __m256d acc_im0 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a0 = _mm256_loadu_pd(p + 2 * k);
    const __m256d b0 = _mm256_loadu_pd(q + 2 * k);
    const __m256d a1 = _mm256_loadu_pd(p + 2 * k + 4);
    const __m256d b1 = _mm256_loadu_pd(q + 2 * k + 4);
    acc_re0 = _mm256_fmadd_pd(a0, b0, acc_re0);
    acc_re1 = _mm256_fmadd_pd(a1, b1, acc_re1);
    acc_im0 = _mm256_fmadd_pd(a0, _mm256_mul_pd(_mm256_permute_pd(b0, 0x5), sign), acc_im0);
    acc_im1 = _mm256_fmadd_pd(a1, _mm256_mul_pd(_mm256_permute_pd(b1, 0x5), sign), acc_im1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d a0 = _mm256_loadu_pd(p + 2 * k);
    const __m256d b0 = _mm256_loadu_pd(q + 2 * k);
    acc_re0 = _mm256_fmadd_pd(a0, b0, acc_re0);
    acc_im0 = _mm256_fmadd_pd(a0, _mm256_mul_pd(_mm256_permute_pd(b0, 0x5), sign), acc_im0);
  }
  double re = hsum(_mm256_add_pd(acc_re0, acc_re1));
  double im = hsum(_mm256_add_pd(acc_im0, acc_im1));
  for (; k < n; ++k) {
    re += phi[k].real() * f[k].real() + phi[k].imag() * f[k].imag();
    im += phi[k].imag() * f[k].real() - phi[k].real() * f[k].imag();
  }
  return {re, im};
}

double scaled_norm_sq_avx2(const cplx* f, const double* scale, std::size_t n) {
  const double* x = reinterpret_cast<const double*>(f);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  if (scale == nullptr) {
    for (; k + 4 <= n; k += 4) {
      const __m256d v0 = _mm256_loadu_pd(x + 2 * k);
      const __m256d v1 = _mm256_loadu_pd(x + 2 * k + 4);
      acc0 = _mm256_fmadd_pd(v0, v0, acc0);
      acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
  } else {
    for (; k + 4 <= n; k += 4) {
      const __m256d s = _mm256_loadu_pd(scale + k);            // s0 s1 s2 s3
      const __m256d s01 = _mm256_permute4x64_pd(s, 0x50);      // s0 s0 s1 s1
      const __m256d s23 = _mm256_permute4x64_pd(s, 0xFA);      // s2 s2 s3 s3
      const __m256d v0 = _mm256_mul_pd(_mm256_loadu_pd(x + 2 * k), s01);
      const __m256d v1 = _mm256_mul_pd(_mm256_loadu_pd(x + 2 * k + 4), s23);
      acc0 = _mm256_fmadd_pd(v0, v0, acc0);
      acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) {
    const double s = scale ? scale[k] : 1.0;
    const double re = s * f[k].real(), im = s * f[k].imag();
    acc += re * re + im * im;
  }
  return acc;
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(xs + 2 * k);
    const __m256d t1 = _mm256_mul_pd(ar, v);
    const __m256d t2 = _mm256_mul_pd(ai, _mm256_permute_pd(v, 0x5));
    // [ar*xr - ai*xi, ar*xi + ai*xr]
    const __m256d prod = _mm256_addsub_pd(t1, t2);
    _mm256_storeu_pd(ys + 2 * k, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * k), prod));
  }
  for (; k < n; ++k) y[k] += a * x[k];
}

void scale_inplace_avx2(cplx* x, const double* scale, std::size_t n) {
  double* xs = reinterpret_cast<double*>(x);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d s = _mm256_loadu_pd(scale + k);
    const __m256d s01 = _mm256_permute4x64_pd(s, 0x50);
    const __m256d s23 = _mm256_permute4x64_pd(s, 0xFA);
    _mm256_storeu_pd(xs + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(xs + 2 * k), s01));
    _mm256_storeu_pd(xs + 2 * k + 4, _mm256_mul_pd(_mm256_loadu_pd(xs + 2 * k + 4), s23));
  }
  for (; k < n; ++k) x[k] *= scale[k];
}

} // namespace

namespace detail {
const KernelTable avx2_table{Isa::avx2,        "avx2",
                             &pairing_avx2,    &scaled_norm_sq_avx2,
                             &axpy_avx2,       &scale_inplace_avx2};
} // namespace detail

} // namespace rigged::kernels
