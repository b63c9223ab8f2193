#include "rigged/linear_map.hpp"

#include <algorithm>
#include <functional>

#include "rigged/errors.hpp"

namespace rigged {

namespace {

bool is_diagonal(const CMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != cplx(0.0)) return false;
  return true;
}

} // namespace

RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  if (is_diagonal(m)) {
    RVector s = m.diagonal().cwiseAbs();
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
  }
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues();
}

double largest_singular_value(const CMatrix& m) {
  const RVector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

double smallest_singular_value(const CMatrix& m) {
  const RVector s = singular_values(m);
  return s.size() ? s(s.size() - 1) : 0.0;
}

double operator_norm(const WeightedTriplet& triplet, const CMatrix& m, int from, int to) {
  const auto n = static_cast<Eigen::Index>(triplet.dim());
  if (m.rows() != n && to != 0) throw DimensionError("target side is plain l2; only level 0 applies");
  if (m.cols() != n && from != 0) throw DimensionError("source side is plain l2; only level 0 applies");
  // Level 0 multiplies by a unitary frame, which leaves singular values alone,
  // so that side is skipped; zero columns (rows) then drop out of the SVD.
  CMatrix x = m;
  if (from == 0) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (!x.col(j).isZero(0.0)) keep.push_back(j);
    if (keep.empty()) return 0.0;
    if (static_cast<Eigen::Index>(keep.size()) < x.cols()) x = CMatrix(x(Eigen::all, keep));
  }
  if (to == 0) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (!x.row(i).isZero(0.0)) keep.push_back(i);
    if (keep.empty()) return 0.0;
    if (static_cast<Eigen::Index>(keep.size()) < x.rows()) x = CMatrix(x(keep, Eigen::all));
  }
  if (to != 0) x = triplet.to_level(x, to);
  if (from != 0) x = triplet.from_level_right(x, from);
  return largest_singular_value(x);
}

CVector LinearMap::apply(const CVector& x) const {
  if (x.size() != matrix_.cols()) throw DimensionError("operand length does not match map");
  return matrix_ * x;
}

LinearMap LinearMap::certified(const WeightedTriplet& triplet,
                               const std::vector<LevelPair>& pairs) const {
  LinearMap out = *this;
  for (const auto& p : pairs) out.certificate_[p] = operator_norm(triplet, matrix_, p.from, p.to);
  return out;
}

LinearMap LinearMap::with_certificate(LevelPair pair, double norm) const {
  LinearMap out = *this;
  out.certificate_[pair] = norm;
  return out;
}

std::optional<double> LinearMap::certificate(int from, int to) const {
  const auto it = certificate_.find(LevelPair{from, to});
  if (it == certificate_.end()) return std::nullopt;
  return it->second;
}

WeightedTriplet graph_norm_triplet(const LinearMap& t) { return graph_norm_triplet(t.matrix()); }

} // namespace rigged
