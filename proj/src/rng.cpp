#include "rigged/rng.hpp"

#include <cmath>
#include <numbers>

namespace rigged {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::size_t Rng::index(std::size_t lo, std::size_t hi) {
  const std::uint64_t span = hi - lo + 1;
  // rejection sampling keeps the draw unbiased
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return lo + static_cast<std::size_t>(x % span);
}

CVector Rng::complex_vector(std::size_t n) {
  CVector v(static_cast<Eigen::Index>(n));
  for (auto& z : v) z = complex_normal();
  return v;
}

CMatrix Rng::complex_matrix(std::size_t rows, std::size_t cols) {
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = complex_normal();
  return m;
}

CMatrix random_unitary(std::size_t n, Rng& rng) {
  const CMatrix g = rng.complex_matrix(n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(g.rows(), g.cols());
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

CMatrix random_well_conditioned(std::size_t n, Rng& rng, double s_min, double s_max) {
  const CMatrix u = random_unitary(n, rng);
  const CMatrix v = random_unitary(n, rng);
  RVector s(static_cast<Eigen::Index>(n));
  for (auto& x : s) x = rng.uniform(s_min, s_max);
  return u * s.cast<cplx>().asDiagonal() * v.adjoint();
}

} // namespace rigged
