#include <stdexcept>

#include "rigged/errors.hpp"
#include "rigged/kernels.hpp"

namespace rigged::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(RIGGED_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() noexcept {
#if defined(RIGGED_HAVE_AVX2)
  if (cpu_has_avx2()) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("kernel operands differ in length");
}

} // namespace

bool available(Isa isa) noexcept {
  switch (isa) {
  case Isa::scalar:
    return true;
  case Isa::avx2:
    return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("instruction set not available on this CPU");
#if defined(RIGGED_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

const KernelTable& active() noexcept {
  static const KernelTable& chosen = select();
  return chosen;
}

cplx pairing(std::span<const cplx> phi, std::span<const cplx> f) {
  check_sizes(phi.size(), f.size());
  return active().pairing(phi.data(), f.data(), phi.size());
}

double norm_sq(std::span<const cplx> f) {
  return active().scaled_norm_sq(f.data(), nullptr, f.size());
}

double scaled_norm_sq(std::span<const cplx> f, std::span<const double> scale) {
  check_sizes(f.size(), scale.size());
  return active().scaled_norm_sq(f.data(), scale.data(), f.size());
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(x.size(), y.size());
  active().axpy(a, x.data(), y.data(), x.size());
}

void scale_inplace(std::span<cplx> x, std::span<const double> scale) {
  check_sizes(x.size(), scale.size());
  active().scale_inplace(x.data(), scale.data(), x.size());
}

} // namespace rigged::kernels
