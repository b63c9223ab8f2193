#pragma once

#include <cstdint>
#include <random>

#include "rigged/types.hpp"

namespace rigged {

// Seeded generator with transforms written out explicitly so that draws do
// not depend on the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                                  // [0, 1)
  double uniform(double lo, double hi);
  double normal();                                   // standard normal
  cplx complex_normal();                             // E|z|^2 = 1
  std::size_t index(std::size_t lo, std::size_t hi); // inclusive range
  CVector complex_vector(std::size_t n);
  CMatrix complex_matrix(std::size_t rows, std::size_t cols);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-like random unitary (QR of a complex Gaussian matrix with the
/// diagonal phases of R normalized away).
CMatrix random_unitary(std::size_t n, Rng& rng);

/// U * diag(s) * V^* with s drawn uniformly from [s_min, s_max].
CMatrix random_well_conditioned(std::size_t n, Rng& rng, double s_min = 0.5,
                                double s_max = 5.0);

} // namespace rigged
