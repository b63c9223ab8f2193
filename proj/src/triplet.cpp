#include "rigged/triplet.hpp"

#include <cmath>
#include <string>

#include "rigged/errors.hpp"
#include "rigged/kernels.hpp"

namespace rigged {

const char* to_string(Space s) noexcept {
  switch (s) {
  case Space::D:
    return "D";
  case Space::H:
    return "H";
  case Space::Ddual:
    return "Ddual";
  }
  return "?";
}

CoefVector CoefVector::unit(std::size_t n, std::size_t index, Space label) {
  if (index >= n) throw RangeError("basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return CoefVector(std::move(v), label);
}

CoefVector CoefVector::zero(std::size_t n, Space label) {
  return CoefVector(CVector::Zero(static_cast<Eigen::Index>(n)), label);
}

WeightedTriplet::WeightedTriplet(RVector weights, int levels)
    : WeightedTriplet(std::move(weights), nullptr, levels, true) {}

WeightedTriplet::WeightedTriplet(RVector weights, CMatrix frame, int levels)
    : WeightedTriplet(std::move(weights), std::make_shared<const CMatrix>(std::move(frame)),
                      levels, true) {}

WeightedTriplet WeightedTriplet::relaxed(RVector weights, std::shared_ptr<const CMatrix> frame,
                                         int levels) {
  return WeightedTriplet(std::move(weights), std::move(frame), levels, false);
}

WeightedTriplet WeightedTriplet::with_unitary_frame(RVector weights,
                                                   std::shared_ptr<const CMatrix> frame,
                                                   int levels) {
  return WeightedTriplet(std::move(weights), std::move(frame), levels, true, false);
}

WeightedTriplet WeightedTriplet::trivial(std::size_t n, int levels) {
  return WeightedTriplet(RVector::Ones(static_cast<Eigen::Index>(n)), levels);
}

WeightedTriplet::WeightedTriplet(RVector weights, std::shared_ptr<const CMatrix> frame,
                                 int levels, bool require_finer, bool check_frame)
    : weights_(std::move(weights)), frame_(std::move(frame)), levels_(levels) {
  if (weights_.size() == 0) throw DimensionError("triplet dimension must be positive");
  if (levels_ < 1) throw RangeError("triplet needs at least one seminorm level");
  for (Eigen::Index k = 0; k < weights_.size(); ++k) {
    const double w = weights_(k);
    if (!std::isfinite(w) || w <= 0.0)
      throw ValidationError("weight " + std::to_string(k) + " is not a positive finite number");
    if (require_finer && w < 1.0)
      throw ValidationError("weight " + std::to_string(k) +
                            " is below 1; the topology of D must be finer than H");
  }
  if (frame_) {
    if (frame_->rows() != weights_.size() || frame_->cols() != weights_.size())
      throw DimensionError("triplet frame must be square of the weight dimension");
  }
  if (frame_ && check_frame) {
    const double err =
        (frame_->adjoint() * *frame_ - CMatrix::Identity(frame_->rows(), frame_->cols()))
            .cwiseAbs()
            .maxCoeff();
    if (err > 1e-10) throw ValidationError("triplet frame is not orthonormal");
  }
  build_scales();
}

void WeightedTriplet::build_scales() {
  auto scales = std::make_shared<std::vector<RVector>>();
  scales->reserve(static_cast<std::size_t>(2 * levels_ + 1));
  for (int l = -levels_; l <= levels_; ++l) {
    RVector s(weights_.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) s(k) = std::pow(weights_(k), l);
    scales->push_back(std::move(s));
  }
  scales_ = std::move(scales);
}

bool WeightedTriplet::finer_than_hilbert() const noexcept { return weights_.minCoeff() >= 1.0; }

void WeightedTriplet::check_level(int level, int lo) const {
  if (level < lo || level > levels_)
    throw RangeError("level " + std::to_string(level) + " outside [" + std::to_string(lo) +
                     ", " + std::to_string(levels_) + "]");
}

const RVector& WeightedTriplet::scale(int level) const {
  check_level(level, -levels_);
  return (*scales_)[static_cast<std::size_t>(level + levels_)];
}

CMatrix WeightedTriplet::to_level(const CMatrix& x, int level) const {
  if (static_cast<std::size_t>(x.rows()) != dim())
    throw DimensionError("operand rows do not match triplet dimension");
  const RVector& s = scale(level);
  if (frame_) return s.cast<cplx>().asDiagonal() * (frame_->adjoint() * x);
  return s.cast<cplx>().asDiagonal() * x;
}

CVector WeightedTriplet::to_level(const CVector& x, int level) const {
  if (static_cast<std::size_t>(x.size()) != dim())
    throw DimensionError("vector length does not match triplet dimension");
  CVector y = frame_ ? CVector(frame_->adjoint() * x) : x;
  const RVector& s = scale(level);
  kernels::scale_inplace({y.data(), static_cast<std::size_t>(y.size())},
                         {s.data(), static_cast<std::size_t>(s.size())});
  return y;
}

CMatrix WeightedTriplet::from_level_right(const CMatrix& x, int level) const {
  if (static_cast<std::size_t>(x.cols()) != dim())
    throw DimensionError("operand columns do not match triplet dimension");
  const RVector& s = scale(-level);
  if (frame_) return (x * *frame_) * s.cast<cplx>().asDiagonal();
  return x * s.cast<cplx>().asDiagonal();
}

CVector WeightedTriplet::from_level(const CVector& g, int level) const {
  if (static_cast<std::size_t>(g.size()) != dim())
    throw DimensionError("vector length does not match triplet dimension");
  CVector y = g;
  const RVector& s = scale(-level);
  kernels::scale_inplace({y.data(), static_cast<std::size_t>(y.size())},
                         {s.data(), static_cast<std::size_t>(s.size())});
  if (frame_) return *frame_ * y;
  return y;
}

namespace {

double level_norm(const WeightedTriplet& triplet, const CoefVector& f, int level) {
  if (f.size() != triplet.dim()) throw DimensionError("vector length does not match triplet");
  const RVector& s = triplet.scale(level);
  if (triplet.has_frame()) {
    const CVector g = triplet.frame()->adjoint() * f.coords;
    return std::sqrt(kernels::scaled_norm_sq({g.data(), f.size()}, {s.data(), f.size()}));
  }
  return std::sqrt(kernels::scaled_norm_sq({f.coords.data(), f.size()}, {s.data(), f.size()}));
}

} // namespace

double seminorm(const WeightedTriplet& triplet, const CoefVector& f, int level) {
  triplet.check_level(level, 0);
  return level_norm(triplet, f, level);
}

double dual_norm(const WeightedTriplet& triplet, const CoefVector& phi, int level) {
  triplet.check_level(level, 1);
  return level_norm(triplet, phi, -level);
}

cplx pairing(const CVector& phi, const CVector& f) {
  if (phi.size() != f.size()) throw DimensionError("pairing operands differ in length");
  return kernels::pairing({phi.data(), static_cast<std::size_t>(phi.size())},
                          {f.data(), static_cast<std::size_t>(f.size())});
}

cplx pairing(const CoefVector& phi, const CoefVector& f) { return pairing(phi.coords, f.coords); }

WeightedTriplet graph_norm_triplet(const CMatrix& t) {
  if (t.rows() != t.cols()) throw DimensionError("graph-norm operator must be square");
  const Eigen::Index n = t.rows();
  CMatrix g = CMatrix::Identity(n, n) + t.adjoint() * t;
  g = 0.5 * (g + g.adjoint()).eval();

  bool diagonal = true;
  for (Eigen::Index j = 0; j < n && diagonal; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j && g(i, j) != cplx(0.0)) {
        diagonal = false;
        break;
      }

  if (diagonal) {
    RVector w(n);
    for (Eigen::Index k = 0; k < n; ++k) w(k) = std::sqrt(g(k, k).real());
    return WeightedTriplet(std::move(w), 1);
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(g);
  RVector w = eig.eigenvalues().cwiseMax(1.0).cwiseSqrt();
  return WeightedTriplet(std::move(w), eig.eigenvectors(), 1);
}

} // namespace rigged
