#pragma once

// Concrete examples on a uniform periodic grid of the real line: Hermite
// functions, the Fourier multiplier (I - D²)^{s/2}, the W^{1,2} family
// ξ_n = (I - D²)^{-1/2} φ_n, and the coefficient-space models of the number
// operator and of the Schwartz space in the Hermite basis.

#include <cstddef>
#include <vector>

#include "rigged/riesz.hpp"
#include "rigged/sequence.hpp"
#include "rigged/triplet.hpp"
#include "rigged/types.hpp"

namespace rigged {

class LineGrid {
public:
  /// Nodes x_j = -L + j·(2L/P), j = 0..P-1. P must be a power of two.
  LineGrid(double half_width, std::size_t points);

  /// L = max(20, 2·sqrt(2M+1)), P = 1024.
  static LineGrid for_hermite(std::size_t count);

  double half_width() const noexcept { return half_width_; }
  std::size_t points() const noexcept { return points_; }
  double spacing() const noexcept { return 2.0 * half_width_ / static_cast<double>(points_); }
  double node(std::size_t j) const noexcept { return -half_width_ + static_cast<double>(j) * spacing(); }
  RVector nodes() const;
  /// Angular frequencies of the DFT bins in FFT order.
  RVector frequencies() const;

  bool operator==(const LineGrid&) const = default;

private:
  double half_width_;
  std::size_t points_;
};

struct SampledFunction {
  LineGrid grid;
  CVector values;
};

/// Trapezoidal quadrature h·Σ f_j conj(g_j).
cplx inner(const SampledFunction& f, const SampledFunction& g);
double l2_norm(const SampledFunction& f);

/// Normalized Hermite function φ_n(x) by the three-term recurrence.
double hermite_value(std::size_t n, double x);

/// ∫_{|x|>L} |φ_n|² dx estimated by quadrature outside the grid.
double hermite_tail_mass(std::size_t n, double half_width);

/// φ_0..φ_{count-1} sampled on the grid. Throws SupportError naming the first
/// n whose mass outside [-L, L] reaches 1e-12.
std::vector<SampledFunction> hermite_basis(const LineGrid& grid, std::size_t count);

/// Multiplies the DFT coefficients by (1 + y²)^{s/2}.
SampledFunction sobolev_multiplier(const LineGrid& grid, double s, const SampledFunction& f);

/// Spectral derivative (multiplier i·y).
SampledFunction spectral_derivative(const SampledFunction& f);

/// Fraction of spectral energy in the top quarter of the frequency band.
double high_band_fraction(const SampledFunction& f);

/// W^{1,2} model as a weighted triplet: weights (1 + y²)^{1/2} in the
/// unitary DFT frame, so the level-1 seminorm is the Hilbert norm <·,·>′_{1,2}.
WeightedTriplet sobolev_triplet(const LineGrid& grid);

/// Coordinates √h·values, under which the quadrature inner product becomes
/// the model pairing.
CVector to_coordinates(const SampledFunction& f);

struct SobolevBasis {
  LineGrid grid;
  std::vector<SampledFunction> hermite;
  std::vector<SampledFunction> xi;
  SequenceFamily family;               // ξ_n with dual ζ_n = (I - D²)^{1/2} φ_n
  double construction_residual = 0.0;  // max_n ‖(I - D²)^{1/2} ξ_n - φ_n‖₂
  double hermite_gram_residual = 0.0;  // max |<φ_m, φ_n> - δ_mn|
  double modified_gram_residual = 0.0; // max |<ξ_m, ξ_n>′_{1,2} - δ_mn|
  std::vector<double> norm_ratios;     // (‖ξ‖₂ + ‖Dξ‖₂) / ‖ξ‖′_{1,2}, in [1, √2]
  std::vector<double> xi_norms;        // ‖ξ_n‖₂
  double max_high_band = 0.0;          // aliasing indicator over all inputs
};

SobolevBasis sobolev_basis(const LineGrid& grid, std::size_t count);

/// Default grid for `count`, doubling P while the aliasing check fails and
/// widening the grid while the support check fails (P capped at 2^16).
SobolevBasis sobolev_basis(std::size_t count);

struct NumberOperatorModel {
  WeightedTriplet triplet;
  RieszLikeBasis basis;
};

/// Weights w_k = k with J levels (p_j = ‖N^j ·‖) and the basis from T = diag(k).
/// The basis carries the strictness verdict of the ladder {N, 2N, 4N, 8N}.
NumberOperatorModel number_operator_model(std::size_t n, int levels);

struct SchwartzHermiteModel {
  WeightedTriplet triplet;
  SequenceFamily family; // Ξ = Z = identity
};

SchwartzHermiteModel schwartz_hermite_model(std::size_t n, int levels);

/// {N, 2N, 4N, 8N}.
std::vector<std::size_t> default_ladder(std::size_t n);

} // namespace rigged
