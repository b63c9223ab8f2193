#include "rigged/pseudo_hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "rigged/errors.hpp"
#include "rigged/rng.hpp"
#include "rigged/sequence.hpp"

namespace rigged {

namespace {

constexpr double kUnitaryTol = 1e-10;

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace

LinearMap build_hsa(const RVector& lambda, const CMatrix& psi) {
  if (psi.cols() != lambda.size())
    throw DimensionError("psi has " + std::to_string(psi.cols()) + " columns but " +
                         std::to_string(lambda.size()) + " eigenvalues were given");
  if (!lambda.allFinite()) throw ValidationError("eigenvalues must be finite");
  const CMatrix gram = psi.adjoint() * psi;
  const double defect = max_abs(gram - CMatrix::Identity(psi.cols(), psi.cols()));
  if (defect > kUnitaryTol)
    throw ValidationError("psi is not unitary (max |psi* psi - I| = " + std::to_string(defect) + ")");
  CMatrix h = psi * lambda.cast<cplx>().asDiagonal() * psi.adjoint();
  // symmetrize away rounding so H_sa is Hermitian to machine precision
  h = 0.5 * (h + h.adjoint()).eval();
  return LinearMap(std::move(h));
}

HamiltonianPair build_pair(const RVector& lambda, const CMatrix& psi, const LinearMap& t) {
  LinearMap h_sa = build_hsa(lambda, psi);
  const CMatrix& tm = t.matrix();
  if (tm.rows() != tm.cols() || tm.rows() != psi.rows())
    throw DimensionError("T must be square with the dimension of psi");
  const RVector sv = singular_values(tm);
  if (sv.size() == 0 || sv(sv.size() - 1) <= Tolerances{}.rank * sv(0))
    throw InjectivityError("T is singular at this truncation");
  const auto lu = tm.partialPivLu();
  CMatrix h = lu.solve(h_sa.matrix() * tm);
  CMatrix xi = lu.solve(psi);

  std::vector<double> sorted(lambda.data(), lambda.data() + lambda.size());
  std::sort(sorted.begin(), sorted.end());
  const bool repeated = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();

  return HamiltonianPair{LinearMap(std::move(h)), std::move(h_sa), t, lambda, psi, std::move(xi),
                         repeated};
}

double weak_similarity_residual(const HamiltonianPair& pair, const CVector& xi, const CVector& eta) {
  const CMatrix& t = pair.t.matrix();
  if (xi.size() != t.cols() || eta.size() != t.rows())
    throw DimensionError("vectors do not match the pair dimension");
  // <Φ, f> = f* Φ
  const CVector h_xi = pair.h.apply(xi);
  const CVector t_adj_eta = t.adjoint() * eta;
  const CVector t_xi = t * xi;
  const CVector hsa_eta = pair.h_sa.apply(eta);
  const cplx lhs = t_adj_eta.dot(h_xi);
  const cplx rhs = hsa_eta.dot(t_xi);
  return std::abs(lhs - rhs);
}

double eigen_residual(const HamiltonianPair& pair) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < pair.xi.cols(); ++k) {
    const CVector x = pair.xi.col(k);
    const CVector r = pair.h.apply(x) - pair.eigenvalues(k) * x;
    worst = std::max(worst, r.norm() / x.norm());
  }
  return worst;
}

double non_normality(const HamiltonianPair& pair) {
  const CMatrix& h = pair.h.matrix();
  return largest_singular_value(h * h.adjoint() - h.adjoint() * h);
}

DensityDiagnostic density_diagnostic(const MatrixRule& t_rule,
                                     const std::vector<std::size_t>& ladder,
                                     const TrendRule& trend) {
  validate_ladder(ladder);
  struct Point {
    std::size_t rank;
    double angle;
    double last;
    double norm;
  };
  const auto points = map_ladder(ladder, [&](std::size_t n) {
    const CMatrix t = t_rule(n);
    if (t.rows() != static_cast<Eigen::Index>(n) || t.cols() != static_cast<Eigen::Index>(n))
      throw DimensionError("T rule returned a matrix of the wrong size for N = " + std::to_string(n));
    const CMatrix adj = t.adjoint();
    const RVector sv = singular_values(adj);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > Tolerances{}.rank * sv(0)) ++rank;
    // range(T†) is a subspace of C^N; every principal angle vanishes at full rank
    const double angle = rank == n ? 0.0 : std::numbers::pi / 2.0;
    return Point{rank, angle, adj.col(adj.cols() - 1).norm(), sv.size() ? sv(0) : 0.0};
  });

  DensityDiagnostic out;
  out.ladder = ladder;
  for (const auto& p : points) {
    out.rank.push_back(p.rank);
    out.largest_angle.push_back(p.angle);
    out.adjoint_last_norm.push_back(p.last);
    out.adjoint_norm.push_back(p.norm);
  }
  const auto x = as_doubles(ladder);
  out.slope = loglog_slope(x, out.adjoint_last_norm);
  if (ladder.size() < trend.min_points || !std::isfinite(out.slope)) {
    out.verdict = Verdict::inconclusive;
    out.note = "too few ladder points for a trend";
  } else {
    const SlopeSide side = compare_slope(out.slope, trend.threshold, trend.straddle);
    out.growing = side == SlopeSide::above;
    out.verdict = side == SlopeSide::below ? Verdict::pass : Verdict::inconclusive;
    out.note = out.growing ? "‖T† e_N‖ grows with N; density of the admissible set is not decided"
                           : "T† stays bounded on the ladder";
  }
  return out;
}

HamiltonianPair demo_pair(std::size_t n, std::uint64_t psi_seed) {
  if (n == 0) throw ValidationError("dimension must be positive");
  Rng rng(psi_seed);
  const CMatrix psi = random_unitary(n, rng);
  RVector lambda(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) lambda(static_cast<Eigen::Index>(k)) = static_cast<double>(k + 1);
  CMatrix t = lambda.cast<cplx>().asDiagonal();
  return build_pair(lambda, psi, LinearMap(std::move(t)));
}

} // namespace rigged
