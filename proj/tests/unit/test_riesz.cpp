#include <doctest.h>

#include <numbers>

#include "../oracles.hpp"
#include "rigged/errors.hpp"
#include "rigged/function_spaces.hpp"
#include "rigged/riesz.hpp"
#include "rigged/rng.hpp"

using namespace rigged;

namespace {

RVector linear_weights(std::size_t n) {
  RVector w(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) w(static_cast<Eigen::Index>(k)) = static_cast<double>(k + 1);
  return w;
}

RieszLikeBasis number_basis(std::size_t n, int levels = 1) {
  return make_riesz_like(LinearMap(oracle::diag(oracle::range(n))),
                         WeightedTriplet(linear_weights(n), levels));
}

} // namespace

TEST_CASE("make_riesz_like examples") {
  const auto id = make_riesz_like(LinearMap(CMatrix::Identity(4, 4)), WeightedTriplet::trivial(4));
  CHECK(oracle::identity_defect(id.family.family()) == 0.0);
  CHECK(oracle::identity_defect(id.family.dual()) == 0.0);

  const auto nb = number_basis(4);
  CHECK(oracle::max_abs_diff(nb.family.family(), oracle::diag(oracle::range(4, -1.0))) <= 1e-15);
  CHECK(oracle::max_abs_diff(nb.family.dual(), oracle::diag(oracle::range(4))) == 0.0);
  CHECK(nb.t.certificate(1, 0).value() == doctest::Approx(1.0));

  Rng rng(41);
  const CMatrix t = random_well_conditioned(6, rng);
  const auto b = make_riesz_like(LinearMap(t), graph_norm_triplet(t));
  CHECK(oracle::identity_defect(oracle::matmul(t, b.family.family())) <= 1e-10);
  CHECK(oracle::max_abs_diff(b.family.dual(), oracle::adjoint(t)) == 0.0);
  const auto r = construction_residuals(b);
  CHECK(r.image_identity <= 1e-10);
  CHECK(r.gram_to_dual <= 1e-10);
  CHECK(r.smallest_singular > 0.0);
}

TEST_CASE("make_riesz_like rejects bad operators") {
  CMatrix sing = oracle::diag({1, 2, 0});
  CHECK_THROWS_AS(make_riesz_like(LinearMap(sing), WeightedTriplet::trivial(3)), InjectivityError);
  CHECK_THROWS_AS(make_riesz_like(LinearMap(CMatrix::Identity(3, 2)), WeightedTriplet::trivial(3)),
                  DimensionError);
  CHECK_THROWS_AS(make_riesz_like(LinearMap(CMatrix::Identity(4, 4)), WeightedTriplet::trivial(3)),
                  DimensionError);
  const auto tiny = WeightedTriplet::relaxed((RVector(2) << 1e-10, 1e-10).finished(), nullptr, 1);
  CHECK_THROWS_AS(make_riesz_like(LinearMap(oracle::diag({1e300, 1e300})), tiny), ContinuityError);
}

TEST_CASE("adjoint action examples") {
  const auto nb = number_basis(4);
  for (std::size_t n = 0; n < 4; ++n)
    CHECK(oracle::max_abs_diff(adjoint_action(nb, CoefVector::unit(4, n)).coords,
                               nb.family.dual().col(static_cast<Eigen::Index>(n))) == 0.0);
  const CVector g = (CVector(4) << 1, 1, 0, 0).finished();
  const CVector want = (CVector(4) << 1, 2, 0, 0).finished();
  const CoefVector out = adjoint_action(nb, CoefVector(g));
  CHECK(out.label == Space::Ddual);
  CHECK(oracle::max_abs_diff(out.coords, want) == 0.0);
  CHECK(adjoint_action(nb, CoefVector::zero(4)).coords.isZero(0.0));
}

TEST_CASE("p_zeta examples and the norm identity") {
  const auto nb = number_basis(4);
  for (std::size_t n = 0; n < 4; ++n) {
    const CoefVector xi(nb.family.family().col(static_cast<Eigen::Index>(n)));
    CHECK(p_zeta_seminorm(nb.family, xi) == doctest::Approx(1.0).epsilon(1e-15));
  }
  const CVector f = (CVector(4) << 1, 1, 0, 0).finished() / std::sqrt(2.0);
  CHECK(p_zeta_seminorm(nb.family, CoefVector(f)) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
  CHECK(p_zeta_seminorm(nb.family, CoefVector::zero(4)) == 0.0);

  Rng rng(42);
  const CMatrix t = random_well_conditioned(6, rng);
  const auto b = make_riesz_like(LinearMap(t), WeightedTriplet::trivial(6));
  for (int i = 0; i < 20; ++i) {
    const CVector v = rng.complex_vector(6);
    CHECK(std::abs(p_zeta_seminorm(b.family, CoefVector(v)) - oracle::norm(oracle::matvec(t, v))) <= 1e-12);
  }
}

TEST_CASE("range membership examples") {
  const BasisRule rule = [](std::size_t n) { return number_basis(n); };
  const std::vector<std::size_t> ladder{8, 16, 32, 64};

  const auto zeta1 = range_membership(rule, [](std::size_t k) { return k == 1 ? cplx(1.0) : cplx(0.0); }, ladder);
  CHECK(zeta1.in_range == Verdict::pass);
  for (double s : zeta1.sq_sums) CHECK(s == doctest::Approx(1.0));

  const auto ones = range_membership(rule, [](std::size_t) { return cplx(1.0); }, ladder);
  CHECK(ones.in_range == Verdict::pass);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    double partial = 0.0;
    for (std::size_t k = 1; k <= ladder[i]; ++k) partial += 1.0 / static_cast<double>(k * k);
    CHECK(ones.sq_sums[i] == doctest::Approx(partial).epsilon(1e-14));
    CHECK(std::numbers::pi * std::numbers::pi / 6 - ones.sq_sums[i] <= 1.0 / static_cast<double>(ladder[i]));
    CHECK(ones.preimage_residuals[i] <= 1e-10);
  }

  const auto lin = range_membership(rule, [](std::size_t k) { return cplx(static_cast<double>(k)); }, ladder);
  CHECK(lin.in_range == Verdict::fail);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    CHECK(lin.sq_sums[i] == doctest::Approx(static_cast<double>(ladder[i])).epsilon(1e-14));
    CHECK(lin.preimage_residuals[i] <= 1e-10);
  }

  const auto short_ladder = range_membership(rule, [](std::size_t) { return cplx(1.0); }, {4, 8});
  CHECK(short_ladder.in_range == Verdict::inconclusive);
}

TEST_CASE("equivalence check examples") {
  const SequenceFamily on(CMatrix::Identity(4, 4), WeightedTriplet::trivial(4), CMatrix::Identity(4, 4));
  const auto a = check_riesz_equivalence(on, 50, 1);
  CHECK(oracle::identity_defect(a.s.matrix()) <= 1e-15);
  CHECK(std::abs(a.positivity) <= 1e-12);
  REQUIRE(a.p_zeta_level.has_value());
  CHECK(*a.p_zeta_level == 0);
  CHECK(a.verdict == Verdict::pass);

  const auto nb = number_basis(4);
  const auto b = check_riesz_equivalence(nb.family, 50, 2);
  CHECK(oracle::max_abs_diff(b.s.matrix(), oracle::diag(oracle::range(4, 2.0))) <= 1e-12);
  CHECK(std::abs(b.positivity) <= 1e-10);
  REQUIRE(b.p_zeta_level.has_value());
  CHECK(*b.p_zeta_level == 1);
  CHECK(b.verdict == Verdict::pass);
  for (double s : b.p_zeta_sampled) CHECK(s >= 0.0);
  CHECK(b.p_zeta_sampled[1] <= b.p_zeta_constants[1] * (1 + 1e-12));

  Rng rng(43);
  const CMatrix t = random_well_conditioned(6, rng);
  const auto c = make_riesz_like(LinearMap(t), WeightedTriplet::trivial(6));
  const auto eq = check_riesz_equivalence(c.family, 50, 3);
  CHECK(oracle::max_abs_diff(eq.s.matrix(), oracle::matmul(oracle::adjoint(t), t)) <= 1e-10);
  CHECK(eq.hermitian_defect <= 1e-10);

  CMatrix sing = CMatrix::Identity(3, 3);
  sing.col(2) = sing.col(1);
  CHECK_THROWS_AS(check_riesz_equivalence(SequenceFamily(sing, WeightedTriplet::trivial(3), CMatrix::Identity(3, 3), 10.0), 5, 1),
                  InjectivityError);
}

TEST_CASE("square root of S maps the family to an orthonormal one") {
  Rng rng(44);
  const CMatrix t = random_well_conditioned(6, rng);
  const auto b = make_riesz_like(LinearMap(t), WeightedTriplet::trivial(6));
  const auto eq = check_riesz_equivalence(b.family, 10, 4);
  const CMatrix r = positive_square_root(eq.s).matrix();
  const CMatrix img = oracle::matmul(r, b.family.family());
  CHECK(oracle::identity_defect(oracle::matmul(oracle::adjoint(img), img)) <= 1e-9);
  CHECK(oracle::max_abs_diff(oracle::matmul(r, r), eq.s.matrix()) <= 1e-9);
}

TEST_CASE("strictness examples") {
  const std::vector<std::size_t> ladder{8, 16, 32, 64};
  const auto j1 = strictness_report(BasisRule([](std::size_t n) { return number_basis(n, 1); }), ladder);
  CHECK(j1.verdict == Verdict::strict);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    CHECK(std::abs(j1.lower[i] - 1.0) <= 1e-12);
    CHECK(std::abs(j1.upper[1][i] - 1.0) <= 1e-12);
  }

  const auto j2 = strictness_report(BasisRule([](std::size_t n) { return number_basis(n, 2); }), ladder);
  CHECK(j2.verdict == Verdict::non_strict);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double n = static_cast<double>(ladder[i]);
    CHECK(std::abs(j2.upper[2][i] - n * n) <= 1e-8);
  }
  CHECK(j2.upper_slopes[2] == doctest::Approx(2.0).epsilon(1e-9));

  const auto ones = strictness_report(
      FamilyRule([](std::size_t n) {
        const auto nn = static_cast<Eigen::Index>(n);
        return SequenceFamily(CMatrix::Identity(nn, nn), WeightedTriplet::trivial(n));
      }),
      ladder);
  CHECK(ones.verdict == Verdict::strict);
  for (double l : ones.lower) CHECK(l == doctest::Approx(1.0));

  const auto few = strictness_report(BasisRule([](std::size_t n) { return number_basis(n, 1); }), {4, 8});
  CHECK(few.verdict == Verdict::inconclusive);
}

TEST_CASE("strictness lower constant equals the weighted sigma_min squared") {
  Rng rng(45);
  const CMatrix t = random_well_conditioned(5, rng);
  const RVector w = (RVector(5) << 1, 2, 2, 3, 5).finished();
  const auto b = make_riesz_like(LinearMap(t), WeightedTriplet(w, 2));
  const auto c = strictness_constants(b.family);
  const CMatrix scaled = oracle::matmul(oracle::diag({1, 2, 2, 3, 5}), b.family.family());
  const double lo = 1.0 / oracle::sigma_max(oracle::inverse(scaled));
  CHECK(c.lower == doctest::Approx(lo * lo).epsilon(1e-8));
  const double hi = oracle::sigma_max(scaled);
  CHECK(c.upper[1] == doctest::Approx(hi * hi).epsilon(1e-8));
}

TEST_CASE("strictness constants are invariant under a unitary change of basis") {
  Rng rng(46);
  const CMatrix t = random_well_conditioned(5, rng);
  const CMatrix u = random_unitary(5, rng);
  const RVector w = (RVector(5) << 1, 2, 3, 4, 6).finished();
  const auto plain = strictness_constants(make_riesz_like(LinearMap(t), WeightedTriplet(w, 2)).family);
  const CMatrix tu = oracle::matmul(oracle::matmul(u, t), oracle::adjoint(u));
  const auto rotated = strictness_constants(make_riesz_like(LinearMap(tu), WeightedTriplet(w, u, 2)).family);
  CHECK(rotated.lower == doctest::Approx(plain.lower).epsilon(1e-10));
  for (std::size_t q = 0; q < plain.upper.size(); ++q)
    CHECK(rotated.upper[q] == doctest::Approx(plain.upper[q]).epsilon(1e-10));
}

TEST_CASE("hilbert triplet realization examples") {
  const auto id = with_strictness(
      make_riesz_like(LinearMap(CMatrix::Identity(4, 4)), WeightedTriplet::trivial(4)), Verdict::strict);
  const auto hid = hilbert_triplet_realization(id);
  CHECK(hid.triplet.weights().isApprox(RVector::Ones(4)));
  CHECK(hid.plus_gram_residual <= 1e-15);

  const auto nb = with_strictness(number_basis(4), Verdict::strict);
  const auto h = hilbert_triplet_realization(nb);
  CHECK(h.plus_gram_residual <= 1e-12);
  CHECK(h.minus_gram_residual <= 1e-12);
  for (double d : h.dual_norms) CHECK(d == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(47);
  const CMatrix t = random_well_conditioned(6, rng);
  const auto rb = with_strictness(make_riesz_like(LinearMap(t), WeightedTriplet::trivial(6)), Verdict::strict);
  const auto hr = hilbert_triplet_realization(rb);
  // brute force: Gram = Ξ* T* T Ξ
  const CMatrix img = oracle::matmul(t, rb.family.family());
  CHECK(oracle::identity_defect(oracle::matmul(oracle::adjoint(img), img)) <= 1e-10);
  CHECK(hr.plus_gram_residual <= 1e-10);
  CHECK(hr.minus_gram_residual <= 1e-10);

  CHECK_THROWS_AS(hilbert_triplet_realization(number_basis(4, 2)), StateError);
  CHECK_THROWS_AS(with_strictness(number_basis(4), Verdict::pass), ValidationError);
}
