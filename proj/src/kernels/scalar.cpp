#include "rigged/kernels.hpp"

namespace rigged::kernels {
namespace {

cplx pairing_scalar(const cplx* phi, const cplx* f, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pr = phi[k].real(), pi = phi[k].imag();
    const double fr = f[k].real(), fi = f[k].imag();
    re += pr * fr + pi * fi;
    im += pi * fr - pr * fi;
  }
  return {re, im};
}

double scaled_norm_sq_scalar(const cplx* f, const double* scale, std::size_t n) {
  double acc = 0.0;
  if (scale == nullptr) {
    for (std::size_t k = 0; k < n; ++k) acc += std::norm(f[k]);
    return acc;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double re = scale[k] * f[k].real();
    const double im = scale[k] * f[k].imag();
    acc += re * re + im * im;
  }
  return acc;
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void scale_inplace_scalar(cplx* x, const double* scale, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) x[k] *= scale[k];
}

} // namespace

namespace detail {
const KernelTable scalar_table{Isa::scalar,          "scalar",
                               &pairing_scalar,      &scaled_norm_sq_scalar,
                               &axpy_scalar,         &scale_inplace_scalar};
} // namespace detail

} // namespace rigged::kernels
