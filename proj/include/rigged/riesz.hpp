#pragma once

// Riesz-like bases: families {ξ_n} carried to the canonical orthonormal basis
// of H by a continuous injective T : D[t] → H, with dual ζ_n = T† e_n.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rigged/linear_map.hpp"
#include "rigged/sequence.hpp"
#include "rigged/trend.hpp"

namespace rigged {

struct RieszLikeBasis {
  LinearMap t; // certified from level 1 into H
  SequenceFamily family;
  Verdict strictness = Verdict::inconclusive; // strict | non_strict | inconclusive

  const WeightedTriplet& triplet() const noexcept { return family.triplet(); }
};

/// ξ_n = T^-1 e_n and ζ_n = T† e_n. Throws InjectivityError when σ_min(T) is
/// at or below the rank tolerance and ContinuityError when the (1 → H)
/// certificate is not finite.
RieszLikeBasis make_riesz_like(const LinearMap& t, const WeightedTriplet& triplet,
                               const Tolerances& tol = {});

RieszLikeBasis with_strictness(RieszLikeBasis basis, Verdict verdict);

struct ConstructionResiduals {
  double image_identity = 0.0; // max |T Ξ - I|
  double dual_adjoint = 0.0;   // max |Z - T*|
  double gram_to_dual = 0.0;   // max |T*T Ξ - Z|
  double smallest_singular = 0.0; // σ_min(Ξ): ω-independence at truncation
};

ConstructionResiduals construction_residuals(const RieszLikeBasis& basis);

/// T† g = Σ_k <g, e_k> ζ_k.
CoefVector adjoint_action(const RieszLikeBasis& basis, const CoefVector& g);

/// (Σ_k |<ζ_k, f>|²)^{1/2}.
double p_zeta_seminorm(const SequenceFamily& fam, const CoefVector& f);

using BasisRule = std::function<RieszLikeBasis(std::size_t)>;
using FamilyRule = std::function<SequenceFamily(std::size_t)>;
/// Coefficient of a vector at position k, counting from k = 1.
using CoefficientRule = std::function<cplx(std::size_t)>;

CoefVector from_rule(std::size_t n, const CoefficientRule& rule, Space label = Space::H);

struct RangeMembership {
  Verdict in_range = Verdict::inconclusive; // pass | fail | inconclusive
  std::vector<std::size_t> ladder;
  std::vector<double> sq_sums;            // Σ_k |<Ψ, ξ_k>|² per N
  std::vector<double> preimage_residuals; // max |T† h - Ψ| per N
  double growth_slope = 0.0;    // log-log slope of sq_sums
  double increment_slope = 0.0; // log-log slope of successive increments
  std::string note;
};

/// Is Ψ in T†(H)? Bounded Σ_k |<Ψ, ξ_k>|² over the ladder is the evidence;
/// the preimage h = Σ_k <Ψ, ξ_k> e_k is verified at every N.
RangeMembership range_membership(const BasisRule& rule, const CoefficientRule& psi,
                                 const std::vector<std::size_t>& ladder,
                                 const TrendRule& trend = {});

struct RieszEquivalence {
  LinearMap s;                      // S ξ_k = ζ_k, i.e. Z Ξ^-1
  double biorthogonality = 0.0;
  double positivity = 0.0;          // worst signed deviation Re<Sf,f> - Σ|a_k|²
  double positivity_imag = 0.0;     // worst |Im<Sf,f>|
  double hermitian_defect = 0.0;    // max |S - S*|
  std::vector<double> p_zeta_constants; // per level 0..J: sup p_ζ(f)/p_j(f) (exact)
  std::vector<double> p_zeta_sampled;   // same, sampled
  std::optional<int> p_zeta_level;
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

/// Checks the three equivalent descriptions of a Riesz-like basis on a
/// square family: biorthogonal dual with continuous p_ζ, positive S with
/// {ξ_n}, {Sξ_n} biorthogonal, and <Sf, f> = Σ|a_k|² for f = Σ a_k ξ_k.
RieszEquivalence check_riesz_equivalence(const SequenceFamily& fam, std::size_t samples,
                                         std::uint64_t seed, const Tolerances& tol = {});

/// Positive square root of the Hermitian part of S; maps ξ_n to an
/// orthonormal family when S ξ_n = ζ_n.
LinearMap positive_square_root(const LinearMap& s);

struct StrictnessConstants {
  double lower = 0.0;        // σ_min(diag(w) U* Ξ)²
  std::vector<double> upper; // per level q = 0..J: σ_max(diag(w)^q U* Ξ)²
};

StrictnessConstants strictness_constants(const SequenceFamily& fam);

struct StrictnessReport {
  std::vector<std::size_t> ladder;
  std::vector<double> lower;               // per N
  std::vector<std::vector<double>> upper;  // [level][N]
  double inverse_lower_slope = 0.0;
  std::vector<double> upper_slopes;        // per level
  Verdict verdict = Verdict::inconclusive; // strict | non_strict | inconclusive
  std::string note;
};

StrictnessReport strictness_report(const FamilyRule& rule, const std::vector<std::size_t>& ladder,
                                   const TrendRule& trend = {});
StrictnessReport strictness_report(const BasisRule& rule, const std::vector<std::size_t>& ladder,
                                   const TrendRule& trend = {});

struct HilbertTriplet {
  WeightedTriplet triplet;
  double plus_gram_residual = 0.0;  // max |<ξ_i, ξ_j>_{+1} - δ_ij|
  double minus_gram_residual = 0.0; // max |<ζ_i, ζ_j>_{-1} - δ_ij|
  std::vector<double> dual_norms;   // ‖ζ_n‖_{-1}
};

/// The J = 1 triplet with <ξ, η>_{+1} = <Tξ, Tη>. Throws StateError unless the
/// basis carries a strict verdict.
HilbertTriplet hilbert_triplet_realization(const RieszLikeBasis& basis);

} // namespace rigged
