#pragma once

// Data-parallel inner loops shared by every module. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2/FMA variant. The variant
// is chosen once at startup from the running CPU; the selection is immutable.

#include <cstddef>
#include <span>

#include "rigged/types.hpp"

namespace rigged::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // sum_k phi[k] * conj(f[k])
  cplx (*pairing)(const cplx* phi, const cplx* f, std::size_t n);
  // sum_k |scale[k] * f[k]|^2; scale == nullptr means all ones
  double (*scaled_norm_sq)(const cplx* f, const double* scale, std::size_t n);
  // y[k] += a * x[k]
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // x[k] *= scale[k]
  void (*scale_inplace)(cplx* x, const double* scale, std::size_t n);
};

bool available(Isa isa) noexcept;

/// Table for a specific instruction set. Throws std::invalid_argument if the
/// running CPU (or this build) does not support it.
const KernelTable& table(Isa isa);

/// Best table for the running CPU.
const KernelTable& active() noexcept;

// Convenience wrappers over active().

cplx pairing(std::span<const cplx> phi, std::span<const cplx> f);
double norm_sq(std::span<const cplx> f);
double scaled_norm_sq(std::span<const cplx> f, std::span<const double> scale);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void scale_inplace(std::span<cplx> x, std::span<const double> scale);

namespace detail {
extern const KernelTable scalar_table;
#if defined(RIGGED_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
} // namespace detail

} // namespace rigged::kernels
