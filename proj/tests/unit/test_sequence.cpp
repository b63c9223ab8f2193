#include <doctest.h>

#include "../oracles.hpp"
#include "rigged/errors.hpp"
#include "rigged/function_spaces.hpp"
#include "rigged/rng.hpp"
#include "rigged/sequence.hpp"

using namespace rigged;

namespace {

CMatrix eye(Eigen::Index n) { return CMatrix::Identity(n, n); }

// Ξ = diag(1/k), Z = diag(k) with w_k = k, J = 1.
SequenceFamily number_op(std::size_t n, int levels = 1) {
  std::vector<double> k = oracle::range(n), inv = oracle::range(n, -1.0);
  RVector w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) w(static_cast<Eigen::Index>(i)) = k[i];
  return SequenceFamily(oracle::diag(inv), WeightedTriplet(w, levels), oracle::diag(k));
}

CVector cv(std::initializer_list<cplx> v) {
  CVector c(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cplx x : v) c(i++) = x;
  return c;
}

} // namespace

TEST_CASE("biorthogonality residual examples") {
  const auto tr = WeightedTriplet::trivial(4);
  CHECK(biorthogonality_residual(SequenceFamily(eye(4), tr, eye(4))) == 0.0);
  CHECK(biorthogonality_residual(number_op(4)) <= 1e-15);
  const SequenceFamily doubled(eye(4), tr, CMatrix(2.0 * eye(4)));
  CHECK(biorthogonality_residual(doubled) == doctest::Approx(1.0));
  CHECK(doubled.tainted());
  CHECK_FALSE(number_op(4).tainted());
  CHECK_THROWS_AS(biorthogonality_residual(SequenceFamily(eye(4), tr)), StateError);
}

TEST_CASE("family shape checks") {
  const auto tr = WeightedTriplet::trivial(4);
  CHECK_THROWS_AS(SequenceFamily(eye(3), tr), DimensionError);
  CHECK_THROWS_AS(SequenceFamily(eye(4), tr, CMatrix(CMatrix::Identity(4, 3))), DimensionError);
  CMatrix zero_col = eye(4);
  zero_col(2, 2) = 0.0;
  CHECK_THROWS_AS(SequenceFamily(zero_col, tr), ValidationError);
}

TEST_CASE("analysis examples") {
  const auto fam = number_op(4);
  const CVector a = analysis(fam, CoefVector::unit(4, 1));
  CHECK(oracle::max_abs_diff(a, cv({0, 2, 0, 0})) <= 1e-15);
  CHECK(analysis(fam, CoefVector::zero(4)).isZero(0.0));
  const SequenceFamily on(eye(4), WeightedTriplet::trivial(4), eye(4));
  const CVector eta = cv({1, cplx(0, 1), 0, 0});
  CHECK(oracle::max_abs_diff(analysis(on, CoefVector(eta)), eta) == 0.0);
}

TEST_CASE("synthesis examples") {
  const auto fam = number_op(4);
  CVector w2 = CVector::Zero(4);
  w2(1) = 1.0;
  const CoefVector s = synthesis(fam, w2);
  CHECK(s.label == Space::Ddual);
  CHECK(oracle::max_abs_diff(s.coords, cv({0, 2, 0, 0})) <= 1e-15);
  CHECK(synthesis(fam, CVector::Zero(4)).coords.isZero(0.0));
  const SequenceFamily on(eye(4), WeightedTriplet::trivial(4), eye(4));
  const CVector a = cv({1, -2, cplx(0, 3), 4});
  CHECK(oracle::max_abs_diff(synthesis(on, a).coords, a) == 0.0);
  CHECK_THROWS_AS(synthesis(fam, CVector::Zero(3)), DimensionError);
}

TEST_CASE("frame operator examples") {
  const SequenceFamily on(eye(4), WeightedTriplet::trivial(4), eye(4));
  CHECK(oracle::identity_defect(frame_operator(on).matrix()) == 0.0);
  const LinearMap f = frame_operator(number_op(4));
  CHECK(oracle::max_abs_diff(f.matrix(), oracle::diag({1, 4, 9, 16})) <= 1e-14);
  // certified from level 1 into dual level 1: diag(1/k)·diag(k²)·diag(1/k) = I
  CHECK(f.certificate(1, -1).value() == doctest::Approx(1.0));

  CMatrix z = eye(4);
  z.col(3).setZero();
  const LinearMap g = frame_operator(SequenceFamily(eye(4), WeightedTriplet::trivial(4), z, 2.0));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g.matrix());
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  CHECK(es.eigenvalues().minCoeff() <= 1e-12);
}

TEST_CASE("frame operator is synthesis after analysis and is positive") {
  Rng rng(31);
  const CMatrix xi = random_well_conditioned(5, rng);
  const CMatrix z = oracle::adjoint(oracle::inverse(xi));
  const WeightedTriplet tr((RVector(5) << 1, 2, 3, 4, 5).finished(), 1);
  const SequenceFamily fam(xi, tr, z);
  const LinearMap f = frame_operator(fam);
  CMatrix composed(5, 5);
  for (Eigen::Index c = 0; c < 5; ++c)
    composed.col(c) = synthesis(fam, analysis(fam, CoefVector::unit(5, static_cast<std::size_t>(c)))).coords;
  CHECK(oracle::max_abs_diff(f.matrix(), composed) <= 1e-12);
  CHECK(oracle::max_abs_diff(f.matrix(), oracle::matmul(z, oracle::adjoint(z))) <= 1e-12);
  for (int t = 0; t < 50; ++t) {
    const CVector eta = rng.complex_vector(5);
    const cplx q = oracle::pairing(oracle::matvec(f.matrix(), eta), eta);
    CHECK(q.real() >= -1e-12);
  }
}

TEST_CASE("bessel bound examples") {
  CHECK(bessel_bound(number_op(4), 1) == doctest::Approx(1.0).epsilon(1e-12));
  const WeightedTriplet w1234((RVector(4) << 1, 2, 3, 4).finished(), 1);
  const SequenceFamily on(eye(4), w1234, eye(4));
  CHECK(bessel_bound(on, 1) == doctest::Approx(1.0).epsilon(1e-12));
  const SequenceFamily tripled(eye(4), w1234, CMatrix(3.0 * eye(4)), 10.0);
  CHECK(bessel_bound(tripled, 1) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK_THROWS_AS(bessel_bound(on, 2), RangeError);
  CHECK_THROWS_AS(bessel_bound(on, 0), RangeError);
}

TEST_CASE("bessel bound equals the weighted SVD oracle and bounds sampling") {
  Rng rng(32);
  const CMatrix z = rng.complex_matrix(5, 5);
  const std::vector<double> w{1, 1.5, 2, 3, 8};
  RVector wv(5);
  for (int i = 0; i < 5; ++i) wv(i) = w[static_cast<std::size_t>(i)];
  const WeightedTriplet tr(wv, 2);
  const SequenceFamily fam(eye(5), tr, z, 1e6);
  for (int j = 1; j <= 2; ++j) {
    std::vector<double> inv(5);
    for (std::size_t i = 0; i < 5; ++i) inv[i] = std::pow(w[i], -j);
    const double s = oracle::sigma_max(oracle::matmul(oracle::adjoint(z), oracle::diag(inv)));
    CHECK(bessel_bound(fam, j) == doctest::Approx(s * s).epsilon(1e-9));
    Rng sampler(33);
    CHECK(sampled_bessel_sup(fam, j, 2000, sampler) <= bessel_bound(fam, j) * (1 + 1e-12));
  }
}

TEST_CASE("W factor examples") {
  const SequenceFamily on(eye(4), WeightedTriplet::trivial(4), eye(4));
  CHECK(oracle::identity_defect(bessel_w_factor(on).matrix()) == 0.0);
  const LinearMap w = bessel_w_factor(number_op(4));
  CHECK(oracle::max_abs_diff(w.matrix(), oracle::diag({1, 2, 3, 4})) <= 1e-15);
  CHECK(w.certificate(0, -1).value() == doctest::Approx(1.0));

  Rng rng(34);
  const CMatrix z = rng.complex_matrix(4, 3);
  const CMatrix xi = CMatrix::Identity(4, 3);
  const LinearMap wz = bessel_w_factor(SequenceFamily(xi, WeightedTriplet::trivial(4), z, 1e6));
  CHECK(wz.cols() == 4);
  for (Eigen::Index n = 0; n < 3; ++n) CHECK((wz.matrix().col(n) - z.col(n)).isZero(0.0));
  CHECK(wz.matrix().col(3).isZero(0.0));
}

TEST_CASE("riesz-fischer examples") {
  const SequenceFamily on(eye(4), WeightedTriplet::trivial(4));
  const auto r = riesz_fischer_check(on);
  CHECK(r.positive);
  CHECK(r.residual <= 1e-15);
  CHECK(oracle::identity_defect(r.s->matrix()) <= 1e-15);

  const auto fam = number_op(4);
  const SequenceFamily bare(fam.family(), fam.triplet());
  const auto rn = riesz_fischer_check(bare);
  CHECK(rn.positive);
  CHECK(oracle::max_abs_diff(rn.s->matrix(), oracle::diag({1, 2, 3, 4})) <= 1e-12);
  REQUIRE(rn.completed.has_value());
  CHECK(oracle::max_abs_diff(rn.completed->dual(), oracle::diag({1, 2, 3, 4})) <= 1e-12);
  CHECK(rn.s->certificate(1, 0).value() == doctest::Approx(1.0));

  CMatrix dup = eye(4);
  dup.col(3) = dup.col(2);
  const auto rd = riesz_fischer_check(SequenceFamily(dup, WeightedTriplet::trivial(4)));
  CHECK_FALSE(rd.positive);
  CHECK(rd.rank == 3);
  CHECK_FALSE(rd.s.has_value());
}

TEST_CASE("V operator examples") {
  const auto fam = number_op(4);
  const auto z = v_operator(fam, CoefVector::zero(4));
  CHECK(z.coefficients.isZero(0.0));
  CHECK(z.sq_sum == 0.0);
  const auto v = v_operator(fam, CoefVector(CVector::Ones(4)));
  CHECK(oracle::max_abs_diff(v.coefficients, cv({1, 0.5, 1.0 / 3, 0.25})) <= 1e-15);
  CHECK(v.sq_sum == doctest::Approx(1 + 0.25 + 1.0 / 9 + 1.0 / 16).epsilon(1e-15));
  CHECK(v.surjective);

  const SequenceFamily on(eye(4), WeightedTriplet::trivial(4));
  const CVector phi = cv({cplx(1, 1), 2, cplx(0, -1), 0});
  const auto vi = v_operator(on, CoefVector(phi));
  CHECK(oracle::max_abs_diff(vi.coefficients, phi) <= 1e-15);
  CHECK(vi.sq_sum == doctest::Approx(std::pow(oracle::norm(phi), 2)));
}

TEST_CASE("partial sum examples") {
  const auto fam = number_op(4);
  const CoefVector e3 = CoefVector::unit(4, 2);
  CHECK(partial_sum(fam, e3, 2).coords.isZero(0.0));
  CHECK(oracle::max_abs_diff(partial_sum(fam, e3, 3).coords, e3.coords) <= 1e-15);
  CHECK(partial_sum(fam, e3, 0).coords.isZero(0.0));
  CHECK_THROWS_AS(partial_sum(fam, e3, 5), RangeError);

  Rng rng(35);
  const CMatrix xi = random_well_conditioned(6, rng);
  const SequenceFamily g(xi, WeightedTriplet::trivial(6), oracle::adjoint(oracle::inverse(xi)));
  const CoefVector f(rng.complex_vector(6));
  CHECK(oracle::max_abs_diff(partial_sum(g, f, 6).coords, f.coords) <= 1e-12);

  // adjoint action: <S_n† Ψ, f> = <Ψ, S_n f>
  const CoefVector psi(rng.complex_vector(6));
  for (std::size_t n = 0; n <= 6; ++n) {
    const cplx lhs = oracle::pairing(partial_sum_adjoint(g, psi, n).coords, f.coords);
    const cplx rhs = oracle::pairing(psi.coords, partial_sum(g, f, n).coords);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("weak expansion residual examples") {
  const auto fam = number_op(4);
  Rng rng(36);
  const CoefVector f(rng.complex_vector(4)), psi(rng.complex_vector(4));
  CHECK(weak_expansion_residual(fam, psi, f, 4) <= 1e-14);
  CHECK(weak_expansion_residual(fam, CoefVector::zero(4), f, 2) == 0.0);
  const CoefVector e2 = CoefVector::unit(4, 1);
  CHECK(weak_expansion_residual(fam, e2, e2, 1) == doctest::Approx(1.0));
  for (std::size_t n = 2; n <= 4; ++n) CHECK(weak_expansion_residual(fam, e2, e2, n) <= 1e-15);
}

TEST_CASE("permuting a family permutes its analysis coefficients") {
  Rng rng(37);
  const CMatrix xi = random_well_conditioned(5, rng);
  const SequenceFamily g(xi, WeightedTriplet::trivial(5), oracle::adjoint(oracle::inverse(xi)));
  const std::vector<std::size_t> order{3, 0, 4, 1, 2};
  const SequenceFamily p = g.permuted(order);
  const CoefVector eta(rng.complex_vector(5));
  const CVector a = analysis(g, eta), b = analysis(p, eta);
  for (std::size_t n = 0; n < 5; ++n)
    CHECK(std::abs(b(static_cast<Eigen::Index>(n)) - a(static_cast<Eigen::Index>(order[n]))) <= 1e-14);
  CHECK(biorthogonality_residual(p) <= 1e-10);
  CHECK(oracle::max_abs_diff(partial_sum(p, eta, 5).coords, eta.coords) <= 1e-12);
  CHECK_THROWS_AS(g.permuted({0, 0, 1, 2, 3}), ValidationError);
}

TEST_CASE("analysis coefficients obey the duality estimate") {
  // |<ζ_k, η>| <= dual_norm(ζ_k, j) p_j(η)
  const auto fam = number_op(6, 2);
  Rng rng(38);
  for (int t = 0; t < 50; ++t) {
    const CoefVector eta(rng.complex_vector(6));
    const CVector a = analysis(fam, eta);
    for (Eigen::Index k = 0; k < 6; ++k)
      for (int j = 1; j <= 2; ++j)
        CHECK(std::abs(a(k)) <= dual_norm(fam.triplet(), CoefVector(fam.dual().col(k)), j) *
                                    seminorm(fam.triplet(), eta, j) * (1 + 1e-12));
  }
}

TEST_CASE("schauder probe examples") {
  const SequenceFamily on(eye(5), WeightedTriplet::trivial(5));
  const auto a = schauder_inequality_probe(on, 0, 200, 1);
  REQUIRE(a.q_level.has_value());
  CHECK(*a.q_level == 0);
  CHECK(a.worst_ratio[0] <= 1.0 + 1e-12);

  const auto b = schauder_inequality_probe(number_op(5), 1, 200, 2);
  REQUIRE(b.q_level.has_value());
  CHECK(*b.q_level == 1);
  CHECK(b.worst_ratio[1] <= 1.0 + 1e-12);

  CMatrix overlap = CMatrix::Identity(3, 3);
  overlap.col(1) = (overlap.col(0) + 1e-2 * overlap.col(1));
  const auto c = schauder_inequality_probe(SequenceFamily(overlap, WeightedTriplet::trivial(3)), 0, 500, 3);
  CHECK(c.worst_ratio[0] > 1.0);

  const auto again = schauder_inequality_probe(number_op(5), 1, 200, 2);
  CHECK(again.worst_ratio == b.worst_ratio);
}
