#include "rigged/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rigged/errors.hpp"
#include "rigged/kernels.hpp"
#include "rigged/rng.hpp"

namespace rigged {

namespace {

void require_dim(const SequenceFamily& fam, const CoefVector& v, const char* what) {
  if (v.size() != fam.dim())
    throw DimensionError(std::string(what) + " length does not match the family dimension");
}

std::span<const cplx> col_span(const CMatrix& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

std::size_t numerical_rank(const RVector& s, double rel_tol) {
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

} // namespace

SequenceFamily::SequenceFamily(CMatrix family, WeightedTriplet triplet,
                               std::optional<CMatrix> dual, double biorthogonality_tol)
    : family_(std::move(family)), dual_(std::move(dual)), triplet_(std::move(triplet)),
      tol_(biorthogonality_tol) {
  if (static_cast<std::size_t>(family_.rows()) != triplet_.dim())
    throw DimensionError("family rows do not match the triplet dimension");
  for (Eigen::Index j = 0; j < family_.cols(); ++j)
    if (family_.col(j).squaredNorm() == 0.0)
      throw ValidationError("family column " + std::to_string(j) + " is zero");
  if (dual_) {
    if (dual_->rows() != family_.rows() || dual_->cols() != family_.cols())
      throw DimensionError("dual must have the same shape as the family");
    tainted_ = biorthogonality_residual(*this) > tol_;
  }
}

const CMatrix& SequenceFamily::dual() const {
  if (!dual_) throw StateError("sequence family has no dual attached");
  return *dual_;
}

SequenceFamily SequenceFamily::with_dual(CMatrix dual) const {
  return SequenceFamily(family_, triplet_, std::move(dual), tol_);
}

SequenceFamily SequenceFamily::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != count()) throw DimensionError("permutation length mismatch");
  std::vector<bool> seen(order.size(), false);
  CMatrix f(family_.rows(), family_.cols());
  std::optional<CMatrix> d;
  if (dual_) d = CMatrix(dual_->rows(), dual_->cols());
  for (std::size_t n = 0; n < order.size(); ++n) {
    if (order[n] >= order.size() || seen[order[n]])
      throw ValidationError("not a permutation of the family indices");
    seen[order[n]] = true;
    const auto src = static_cast<Eigen::Index>(order[n]);
    f.col(static_cast<Eigen::Index>(n)) = family_.col(src);
    if (d) d->col(static_cast<Eigen::Index>(n)) = dual_->col(src);
  }
  return SequenceFamily(std::move(f), triplet_, std::move(d), tol_);
}

double biorthogonality_residual(const SequenceFamily& fam) {
  const CMatrix& z = fam.dual();
  const CMatrix& xi = fam.family();
  double worst = 0.0;
  for (Eigen::Index n = 0; n < z.cols(); ++n) {
    for (Eigen::Index k = 0; k < xi.cols(); ++k) {
      const cplx g = kernels::pairing(col_span(z, n), col_span(xi, k));
      worst = std::max(worst, std::abs(g - (n == k ? cplx(1.0) : cplx(0.0))));
    }
  }
  return worst;
}

CVector analysis(const SequenceFamily& fam, const CoefVector& eta) {
  require_dim(fam, eta, "analysed vector");
  const CMatrix& z = fam.dual();
  CVector out(z.cols());
  const std::span<const cplx> e{eta.coords.data(), eta.size()};
  for (Eigen::Index k = 0; k < z.cols(); ++k) out(k) = std::conj(kernels::pairing(col_span(z, k), e));
  return out;
}

CoefVector synthesis(const SequenceFamily& fam, const CVector& a) {
  const CMatrix& z = fam.dual();
  if (a.size() != z.cols()) throw DimensionError("coefficient sequence length mismatch");
  CVector out = CVector::Zero(z.rows());
  const std::span<cplx> y{out.data(), static_cast<std::size_t>(out.size())};
  for (Eigen::Index k = 0; k < z.cols(); ++k)
    if (a(k) != cplx(0.0)) kernels::axpy(a(k), col_span(z, k), y);
  return CoefVector(std::move(out), Space::Ddual);
}

LinearMap frame_operator(const SequenceFamily& fam) {
  const CMatrix& z = fam.dual();
  // the (1 -> -1) norm of Z Z* is σ_max(diag(w)^-1 U* Z)², read off the thin factor
  const double s = largest_singular_value(fam.triplet().to_level(z, -1));
  return LinearMap(z * z.adjoint()).with_certificate({1, -1}, s * s);
}

double bessel_bound(const SequenceFamily& fam, int level) {
  fam.triplet().check_level(level, 1);
  const double s = largest_singular_value(fam.triplet().from_level_right(fam.dual().adjoint(), level));
  return s * s;
}

double sampled_bessel_sup(const SequenceFamily& fam, int level, std::size_t samples, Rng& rng) {
  fam.triplet().check_level(level, 1);
  // Z* U diag(w)^-j, so each draw costs O(N M) instead of a frame product
  const CMatrix b = fam.triplet().from_level_right(fam.dual().adjoint(), level);
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    CVector g = rng.complex_vector(fam.dim());
    g /= g.norm();
    const CVector c = b * g;
    best = std::max(best, kernels::norm_sq({c.data(), static_cast<std::size_t>(c.size())}));
  }
  return best;
}

LinearMap bessel_w_factor(const SequenceFamily& fam) {
  const CMatrix& z = fam.dual();
  const auto n = static_cast<Eigen::Index>(fam.dim());
  CMatrix w = CMatrix::Zero(n, std::max(n, z.cols()));
  w.leftCols(z.cols()) = z;
  std::vector<LevelPair> pairs;
  for (int j = 1; j <= fam.triplet().levels(); ++j) pairs.push_back({0, -j});
  return LinearMap(std::move(w)).certified(fam.triplet(), pairs);
}

RieszFischerResult riesz_fischer_check(const SequenceFamily& fam, const Tolerances& tol) {
  RieszFischerResult out;
  const CMatrix& xi = fam.family();
  if (fam.count() > fam.dim()) {
    out.note = "more vectors than the truncation dimension: not Riesz-Fischer-like at this truncation";
    out.rank = numerical_rank(singular_values(xi), tol.rank);
    return out;
  }
  Eigen::BDCSVD<CMatrix> svd(xi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  out.rank = numerical_rank(s, tol.rank);
  if (out.rank < fam.count()) {
    out.note = "rank-deficient family: not Riesz-Fischer-like at this truncation";
    return out;
  }
  // minimal-norm left inverse: S = V Σ^-1 U*
  const CMatrix s_mat =
      svd.matrixV() * s.cwiseInverse().cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
  const CMatrix eye = CMatrix::Identity(xi.cols(), xi.cols());
  out.residual = (s_mat * xi - eye).cwiseAbs().maxCoeff();
  out.positive = true;
  out.s = LinearMap(s_mat).certified(fam.triplet(), {{1, 0}});
  if (!fam.has_dual()) {
    out.completed = fam.with_dual(s_mat.adjoint());
    out.note = "dual attached as the minimal-norm choice zeta_k = S^dagger e_k; other biorthogonal duals may exist";
  } else {
    out.completed = fam;
    out.note = "family already carried a dual; minimal-norm S reported alongside";
  }
  return out;
}

VOperatorResult v_operator(const SequenceFamily& fam, const CoefVector& phi, const Tolerances& tol) {
  require_dim(fam, phi, "functional");
  const CMatrix& xi = fam.family();
  VOperatorResult out;
  out.coefficients.resize(xi.cols());
  const std::span<const cplx> p{phi.coords.data(), phi.size()};
  for (Eigen::Index k = 0; k < xi.cols(); ++k) out.coefficients(k) = kernels::pairing(p, col_span(xi, k));
  out.sq_sum = kernels::norm_sq({out.coefficients.data(), static_cast<std::size_t>(out.coefficients.size())});
  out.surjective = numerical_rank(singular_values(xi.adjoint()), tol.rank) == fam.count();
  return out;
}

CoefVector partial_sum(const SequenceFamily& fam, const CoefVector& f, std::size_t n) {
  require_dim(fam, f, "expanded vector");
  if (n > fam.count()) throw RangeError("partial sum length exceeds the family size");
  const CMatrix& z = fam.dual();
  const CMatrix& xi = fam.family();
  CVector out = CVector::Zero(xi.rows());
  const std::span<cplx> y{out.data(), static_cast<std::size_t>(out.size())};
  const std::span<const cplx> fs{f.coords.data(), f.size()};
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const cplx c = std::conj(kernels::pairing(col_span(z, kk), fs));
    kernels::axpy(c, col_span(xi, kk), y);
  }
  return CoefVector(std::move(out), Space::D);
}

CoefVector partial_sum_adjoint(const SequenceFamily& fam, const CoefVector& psi, std::size_t n) {
  require_dim(fam, psi, "functional");
  if (n > fam.count()) throw RangeError("partial sum length exceeds the family size");
  const CMatrix& z = fam.dual();
  const CMatrix& xi = fam.family();
  CVector out = CVector::Zero(z.rows());
  const std::span<cplx> y{out.data(), static_cast<std::size_t>(out.size())};
  const std::span<const cplx> ps{psi.coords.data(), psi.size()};
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    kernels::axpy(kernels::pairing(ps, col_span(xi, kk)), col_span(z, kk), y);
  }
  return CoefVector(std::move(out), Space::Ddual);
}

double weak_expansion_residual(const SequenceFamily& fam, const CoefVector& psi,
                               const CoefVector& f, std::size_t n) {
  require_dim(fam, psi, "functional");
  require_dim(fam, f, "test vector");
  if (n > fam.count()) throw RangeError("expansion length exceeds the family size");
  const CMatrix& z = fam.dual();
  const CMatrix& xi = fam.family();
  const std::span<const cplx> ps{psi.coords.data(), psi.size()};
  const std::span<const cplx> fs{f.coords.data(), f.size()};
  cplx sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    sum += kernels::pairing(ps, col_span(xi, kk)) * kernels::pairing(col_span(z, kk), fs);
  }
  return std::abs(kernels::pairing(ps, fs) - sum);
}

SchauderProbe schauder_inequality_probe(const SequenceFamily& fam, int p_level,
                                        std::size_t trials, std::uint64_t seed,
                                        const Tolerances& tol) {
  const WeightedTriplet& tr = fam.triplet();
  tr.check_level(p_level, 0);
  SchauderProbe out;
  out.p_level = p_level;
  out.trials = trials;
  out.worst_ratio.assign(static_cast<std::size_t>(tr.levels() + 1), 0.0);
  const std::size_t m_total = fam.count();
  if (m_total == 0 || trials == 0) return out;

  // p_q(Ξ c) = ‖diag(w)^q U* Ξ c‖, so the level images of Ξ are formed once
  std::vector<CMatrix> images;
  for (int q = 0; q <= tr.levels(); ++q) images.push_back(tr.to_level(fam.family(), q));
  const CMatrix& target = images[static_cast<std::size_t>(p_level)];

  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = rng.index(1, m_total);
    const std::size_t m = rng.index(0, m_total - n);
    const CVector c = rng.complex_vector(n + m);
    const auto nn = static_cast<Eigen::Index>(n);
    const double num = (target.leftCols(nn) * c.head(nn)).norm();
    for (int q = 0; q <= tr.levels(); ++q) {
      const double den = (images[static_cast<std::size_t>(q)].leftCols(static_cast<Eigen::Index>(n + m)) * c).norm();
      double ratio = 0.0;
      if (den > 0.0) ratio = num / den;
      else if (num > 0.0) ratio = std::numeric_limits<double>::infinity();
      auto& w = out.worst_ratio[static_cast<std::size_t>(q)];
      w = std::max(w, ratio);
    }
  }
  for (int q = 0; q <= tr.levels(); ++q) {
    if (out.worst_ratio[static_cast<std::size_t>(q)] <= tol.ratio_bound) {
      out.q_level = q;
      break;
    }
  }
  return out;
}

} // namespace rigged
