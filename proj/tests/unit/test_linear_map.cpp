#include <doctest.h>

#include "../oracles.hpp"
#include "rigged/errors.hpp"
#include "rigged/linear_map.hpp"
#include "rigged/rng.hpp"

using namespace rigged;

TEST_CASE("singular values agree with power iteration") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const CMatrix m = rng.complex_matrix(5, 4);
    CHECK(largest_singular_value(m) == doctest::Approx(oracle::sigma_max(m)).epsilon(1e-9));
    const CMatrix inv = oracle::inverse(m.topRows(4));
    CHECK(smallest_singular_value(m.topRows(4)) ==
          doctest::Approx(1.0 / oracle::sigma_max(inv)).epsilon(1e-8));
  }
  const RVector d = singular_values(oracle::diag({3, -5, 1}));
  CHECK(d(0) == doctest::Approx(5.0));
  CHECK(d(1) == doctest::Approx(3.0));
  CHECK(d(2) == doctest::Approx(1.0));
}

TEST_CASE("operator norm between levels matches the weighted product") {
  const RVector w = (RVector(3) << 1, 2, 4).finished();
  const WeightedTriplet tr(w, 2);
  Rng rng(22);
  const CMatrix m = rng.complex_matrix(3, 3);
  for (int from = -2; from <= 2; ++from)
    for (int to = -2; to <= 2; ++to) {
      std::vector<double> left(3), right(3);
      for (int k = 0; k < 3; ++k) {
        left[static_cast<std::size_t>(k)] = std::pow(w(k), to);
        right[static_cast<std::size_t>(k)] = std::pow(w(k), -from);
      }
      const CMatrix ref = oracle::matmul(oracle::matmul(oracle::diag(left), m), oracle::diag(right));
      CHECK(operator_norm(tr, m, from, to) == doctest::Approx(oracle::sigma_max(ref)).epsilon(1e-9));
    }
}

TEST_CASE("operator norm with a frame conjugates by it") {
  Rng rng(23);
  const CMatrix u = random_unitary(4, rng);
  const RVector w = (RVector(4) << 1, 3, 2, 5).finished();
  const WeightedTriplet tr(w, u, 1);
  const CMatrix m = rng.complex_matrix(4, 4);
  std::vector<double> wv(w.data(), w.data() + 4), inv(4);
  for (int k = 0; k < 4; ++k) inv[static_cast<std::size_t>(k)] = 1.0 / w(k);
  const CMatrix ref = oracle::matmul(
      oracle::matmul(oracle::matmul(oracle::matmul(oracle::diag(wv), oracle::adjoint(u)), m), u),
      oracle::diag(inv));
  CHECK(operator_norm(tr, m, 1, 1) == doctest::Approx(oracle::sigma_max(ref)).epsilon(1e-9));
}

TEST_CASE("rectangular sides are plain l2 at level zero") {
  const WeightedTriplet tr((RVector(3) << 1, 2, 3).finished(), 1);
  const CMatrix m = CMatrix::Ones(3, 2);
  CHECK(operator_norm(tr, m, 0, 1) > 0.0);
  CHECK_THROWS_AS(operator_norm(tr, m, 1, 0), DimensionError);
  CHECK_THROWS_AS(operator_norm(tr, CMatrix::Ones(3, 3), 2, 0), RangeError);
}

TEST_CASE("certificates record and look up level pairs") {
  const WeightedTriplet tr((RVector(3) << 1, 2, 3).finished(), 1);
  const LinearMap t(oracle::diag({1, 2, 3}));
  const LinearMap c = t.certified(tr, {{1, 0}, {0, 0}});
  CHECK(c.certificate(1, 0).value() == doctest::Approx(1.0));
  CHECK(c.certificate(0, 0).value() == doctest::Approx(3.0));
  CHECK_FALSE(c.certificate(0, -1).has_value());
  const LinearMap d = c.with_certificate({0, -1}, 7.0);
  CHECK(*d.certificate(0, -1) == 7.0);
  CHECK_FALSE(c.certificate(0, -1).has_value());
  const CVector x = CVector::Ones(3);
  CHECK(oracle::max_abs_diff(t.apply(x), oracle::matvec(t.matrix(), x)) == 0.0);
}
