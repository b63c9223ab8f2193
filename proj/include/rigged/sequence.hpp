#pragma once

// Sequence families {ξ_n} ⊂ D with optional duals {ζ_n} ⊂ D×, and the
// analysis/synthesis/frame operators and Bessel-like / Riesz-Fischer-like
// diagnostics built on them.
//
// Matrix conventions (pairing <Φ, f> = f* Φ):
//   Ξ* Z  has entry (k, n) = <ζ_n, ξ_k>
//   analysis η  = Z* η      ({conj <ζ_k, η>})
//   synthesis a = Z a       (Σ a_k ζ_k)

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rigged/linear_map.hpp"
#include "rigged/triplet.hpp"
#include "rigged/types.hpp"

namespace rigged {

class Rng;

struct Tolerances {
  double biorthogonality = 1e-10;
  double rank = 1e-12;             // relative to the largest singular value
  double ratio_bound = 1.0 + 1e-9; // constant allowed in seminorm-domination searches
  double identity = 1e-9;          // relative slack on exact algebraic identities
};

class SequenceFamily {
public:
  /// Columns of `family` are ξ_n; `dual` columns (when given) are ζ_n.
  SequenceFamily(CMatrix family, WeightedTriplet triplet, std::optional<CMatrix> dual = {},
                 double biorthogonality_tol = Tolerances{}.biorthogonality);

  const CMatrix& family() const noexcept { return family_; }
  bool has_dual() const noexcept { return dual_.has_value(); }
  /// Throws StateError when no dual is attached.
  const CMatrix& dual() const;
  const WeightedTriplet& triplet() const noexcept { return triplet_; }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(family_.rows()); }
  std::size_t count() const noexcept { return static_cast<std::size_t>(family_.cols()); }

  /// Dual present and biorthogonality residual above tolerance.
  bool tainted() const noexcept { return tainted_; }
  double biorthogonality_tol() const noexcept { return tol_; }

  SequenceFamily with_dual(CMatrix dual) const;
  /// Column n of the result is column order[n] of this family (and dual).
  SequenceFamily permuted(const std::vector<std::size_t>& order) const;

private:
  CMatrix family_;
  std::optional<CMatrix> dual_;
  WeightedTriplet triplet_;
  double tol_;
  bool tainted_ = false;
};

/// max_{n,k} |<ζ_n, ξ_k> - δ_nk|.
double biorthogonality_residual(const SequenceFamily& fam);

/// {conj <ζ_k, η>}_k.
CVector analysis(const SequenceFamily& fam, const CoefVector& eta);

/// Σ_k a_k ζ_k, labelled as an element of D×.
CoefVector synthesis(const SequenceFamily& fam, const CVector& a);

/// η ↦ Σ_k conj<ζ_k, η> ζ_k, i.e. Z Z*, certified from level 1 to dual level 1.
LinearMap frame_operator(const SequenceFamily& fam);

/// sup over the level-j unit ball of Σ_k |<ζ_k, η>|², as σ_max(Z* U diag(w)^-j)².
double bessel_bound(const SequenceFamily& fam, int level);

/// Monte-Carlo estimate of the same supremum from `samples` points of the
/// level-j unit sphere. Never exceeds bessel_bound.
double sampled_bessel_sup(const SequenceFamily& fam, int level, std::size_t samples, Rng& rng);

/// W with W e_n = ζ_n (zero columns beyond the family), certified from H to
/// every dual level.
LinearMap bessel_w_factor(const SequenceFamily& fam);

struct RieszFischerResult {
  bool positive = false;
  std::size_t rank = 0;
  double residual = 0.0;               // max |S ξ_n - e_n|
  std::optional<LinearMap> s;          // minimal-norm S with S ξ_n = e_n, certified (1 → 0)
  std::optional<SequenceFamily> completed; // family with dual ζ_k = S† e_k attached if it had none
  std::string note;
};

RieszFischerResult riesz_fischer_check(const SequenceFamily& fam, const Tolerances& tol = {});

struct VOperatorResult {
  CVector coefficients; // {<Φ, ξ_k>}
  double sq_sum = 0.0;
  bool surjective = false; // rank Ξ* = M at this truncation
};

VOperatorResult v_operator(const SequenceFamily& fam, const CoefVector& phi,
                           const Tolerances& tol = {});

/// S_n f = Σ_{k<n} conj<ζ_k, f> ξ_k (first n terms).
CoefVector partial_sum(const SequenceFamily& fam, const CoefVector& f, std::size_t n);

/// S_n† Ψ = Σ_{k<n} <Ψ, ξ_k> ζ_k.
CoefVector partial_sum_adjoint(const SequenceFamily& fam, const CoefVector& psi, std::size_t n);

/// |<Ψ, f> - Σ_{k<n} <Ψ, ξ_k><ζ_k, f>|.
double weak_expansion_residual(const SequenceFamily& fam, const CoefVector& psi,
                               const CoefVector& f, std::size_t n);

struct SchauderProbe {
  int p_level = 0;
  std::optional<int> q_level;      // smallest level meeting the ratio bound
  std::vector<double> worst_ratio; // per candidate level 0..J
  std::size_t trials = 0;
};

/// Randomized search for the smallest q with
/// p_j(Σ_{i<n} c_i ξ_i) <= C · p_q(Σ_{i<n+m} c_i ξ_i).
SchauderProbe schauder_inequality_probe(const SequenceFamily& fam, int p_level,
                                        std::size_t trials, std::uint64_t seed,
                                        const Tolerances& tol = {});

} // namespace rigged
