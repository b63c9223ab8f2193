#pragma once

// Truncated weighted sequence-space model of a rigged Hilbert space
// D[t] ⊂ H ⊂ D×[t×].
//
// A vector is a coefficient vector against the canonical orthonormal basis of
// H. The topology of D is given by the seminorm ladder
//
//     p_j(f) = ‖diag(w)^j U* f‖₂,   j = 0..J,
//
// where U is an optional orthonormal frame (identity when absent). Level 0 is
// the Hilbert norm. Negative levels -j realize the dual norms of D×, so every
// continuity constant in the library is a largest singular value of
// diag(w)^to U* · A · U diag(w)^-from.

#include <cstddef>
#include <memory>
#include <vector>

#include "rigged/types.hpp"

namespace rigged {

enum class Space { D, H, Ddual };

const char* to_string(Space s) noexcept;

struct CoefVector {
  CVector coords;
  Space label = Space::H;

  CoefVector() = default;
  explicit CoefVector(CVector c, Space l = Space::H) : coords(std::move(c)), label(l) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(coords.size()); }

  /// Canonical basis vector e_{index+1} (0-based index).
  static CoefVector unit(std::size_t n, std::size_t index, Space label = Space::H);
  static CoefVector zero(std::size_t n, Space label = Space::H);
};

class WeightedTriplet {
public:
  /// Requires every weight >= 1 and levels >= 1.
  WeightedTriplet(RVector weights, int levels);

  /// Same, with an orthonormal frame (columns) relating the weighted basis to
  /// the canonical one.
  WeightedTriplet(RVector weights, CMatrix frame, int levels);

  /// Triplet with weights only required to be positive. Used for triplets
  /// realized from an operator, whose smallest weight may fall below 1.
  static WeightedTriplet relaxed(RVector weights, std::shared_ptr<const CMatrix> frame,
                                 int levels);

  /// Frame known to be unitary by construction (e.g. a DFT matrix); the
  /// O(N^3) orthonormality check is skipped. Weights must still be >= 1.
  static WeightedTriplet with_unitary_frame(RVector weights, std::shared_ptr<const CMatrix> frame,
                                            int levels);

  static WeightedTriplet trivial(std::size_t n, int levels = 1);

  std::shared_ptr<const CMatrix> shared_frame() const noexcept { return frame_; }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  int levels() const noexcept { return levels_; }
  const RVector& weights() const noexcept { return weights_; }
  bool has_frame() const noexcept { return frame_ != nullptr; }
  const CMatrix* frame() const noexcept { return frame_.get(); }
  bool finer_than_hilbert() const noexcept;

  /// Throws RangeError unless lo <= level <= levels().
  void check_level(int level, int lo) const;

  /// Elementwise w^level (signed levels allowed, |level| <= levels()).
  const RVector& scale(int level) const;

  /// diag(w)^level U* x  (x has dim() rows; any number of columns).
  CMatrix to_level(const CMatrix& x, int level) const;
  CVector to_level(const CVector& x, int level) const;

  /// x U diag(w)^-level  (x has dim() columns).
  CMatrix from_level_right(const CMatrix& x, int level) const;

  /// U diag(w)^-level x: maps level-`level` unit-sphere coordinates back to
  /// canonical coordinates.
  CVector from_level(const CVector& g, int level) const;

private:
  WeightedTriplet(RVector weights, std::shared_ptr<const CMatrix> frame, int levels,
                  bool require_finer, bool check_frame = true);
  void build_scales();

  RVector weights_;
  std::shared_ptr<const CMatrix> frame_;
  int levels_ = 1;
  // scales_[level + levels_] = w^level
  std::shared_ptr<const std::vector<RVector>> scales_;
};

/// p_j(f) = ‖diag(w)^j U* f‖₂, 0 <= j <= J.
double seminorm(const WeightedTriplet& triplet, const CoefVector& f, int level);

/// ‖diag(w)^-j U* Φ‖₂, 1 <= j <= J; the norm of Φ as a functional on the
/// level-j unit ball.
double dual_norm(const WeightedTriplet& triplet, const CoefVector& phi, int level);

/// <Φ, f> = Σ Φ_k conj(f_k); linear in Φ, conjugate-linear in f.
cplx pairing(const CoefVector& phi, const CoefVector& f);
cplx pairing(const CVector& phi, const CVector& f);

/// J = 1 triplet of the graph norm ‖f‖_T = ‖(I + T*T)^{1/2} f‖.
WeightedTriplet graph_norm_triplet(const CMatrix& t);

} // namespace rigged
