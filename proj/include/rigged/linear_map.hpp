#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "rigged/triplet.hpp"
#include "rigged/types.hpp"

namespace rigged {

// (from-level, to-level) of a continuity estimate. Negative levels are dual
// levels of D×; 0 is H.
struct LevelPair {
  int from = 0;
  int to = 0;
  auto operator<=>(const LevelPair&) const = default;
};

/// Largest singular value of diag(w)^to U* · m · U diag(w)^-from. When a side
/// of m does not match the triplet dimension it is treated as plain ℓ² and
/// its level must be 0.
double operator_norm(const WeightedTriplet& triplet, const CMatrix& m, int from, int to);

double largest_singular_value(const CMatrix& m);
double smallest_singular_value(const CMatrix& m);
RVector singular_values(const CMatrix& m); // descending

/// Dense matrix together with the operator norms it has been certified for.
class LinearMap {
public:
  LinearMap() = default;
  explicit LinearMap(CMatrix m) : matrix_(std::move(m)) {}

  const CMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index rows() const noexcept { return matrix_.rows(); }
  Eigen::Index cols() const noexcept { return matrix_.cols(); }

  CVector apply(const CVector& x) const;

  /// Copy carrying additional certificate entries computed in `triplet`.
  LinearMap certified(const WeightedTriplet& triplet, const std::vector<LevelPair>& pairs) const;

  /// Copy carrying a certificate the caller computed another way (e.g. from
  /// a thin factor of the matrix).
  LinearMap with_certificate(LevelPair pair, double norm) const;

  std::optional<double> certificate(int from, int to) const;
  const std::map<LevelPair, double>& certificates() const noexcept { return certificate_; }

private:
  CMatrix matrix_;
  std::map<LevelPair, double> certificate_;
};

WeightedTriplet graph_norm_triplet(const LinearMap& t);

} // namespace rigged
