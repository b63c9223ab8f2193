#include "rigged/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rigged/errors.hpp"
#include "rigged/kernels.hpp"
#include "rigged/rng.hpp"

namespace rigged {

namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_abs_identity_defect(const CMatrix& m) {
  return max_abs(m - CMatrix::Identity(m.rows(), m.cols()));
}

} // namespace

RieszLikeBasis make_riesz_like(const LinearMap& t, const WeightedTriplet& triplet,
                               const Tolerances& tol) {
  const CMatrix& m = t.matrix();
  if (m.rows() != m.cols()) throw DimensionError("transforming operator must be square");
  if (static_cast<std::size_t>(m.rows()) != triplet.dim())
    throw DimensionError("transforming operator does not match the triplet dimension");
  const RVector s = singular_values(m);
  if (!(s(0) > 0.0) || !(s(s.size() - 1) > tol.rank * s(0)))
    throw InjectivityError("operator is singular at this truncation (sigma_min below tolerance)");

  LinearMap certified = t.certified(triplet, {{1, 0}});
  const double cert = *certified.certificate(1, 0);
  if (!std::isfinite(cert)) throw ContinuityError("continuity certificate overflowed");

  const auto n = m.rows();
  CMatrix xi = m.partialPivLu().solve(CMatrix::Identity(n, n));
  CMatrix z = m.adjoint();
  SequenceFamily fam(std::move(xi), triplet, std::move(z), tol.biorthogonality);
  return RieszLikeBasis{std::move(certified), std::move(fam), Verdict::inconclusive};
}

RieszLikeBasis with_strictness(RieszLikeBasis basis, Verdict verdict) {
  if (verdict != Verdict::strict && verdict != Verdict::non_strict &&
      verdict != Verdict::inconclusive)
    throw ValidationError("strictness must be strict, non-strict or inconclusive");
  basis.strictness = verdict;
  return basis;
}

ConstructionResiduals construction_residuals(const RieszLikeBasis& basis) {
  const CMatrix& t = basis.t.matrix();
  const CMatrix& xi = basis.family.family();
  const CMatrix& z = basis.family.dual();
  ConstructionResiduals r;
  r.image_identity = max_abs_identity_defect(t * xi);
  r.dual_adjoint = max_abs(z - t.adjoint());
  r.gram_to_dual = max_abs(t.adjoint() * (t * xi) - z);
  r.smallest_singular = smallest_singular_value(xi);
  return r;
}

CoefVector adjoint_action(const RieszLikeBasis& basis, const CoefVector& g) {
  if (g.size() != basis.family.dim()) throw DimensionError("vector length does not match basis");
  const CMatrix& z = basis.family.dual();
  CVector out = CVector::Zero(z.rows());
  const std::span<cplx> y{out.data(), static_cast<std::size_t>(out.size())};
  for (Eigen::Index k = 0; k < z.cols(); ++k) {
    // d_k = <g, e_k> = g_k
    const cplx d = g.coords(k);
    if (d != cplx(0.0))
      kernels::axpy(d, {z.col(k).data(), static_cast<std::size_t>(z.rows())}, y);
  }
  return CoefVector(std::move(out), Space::Ddual);
}

double p_zeta_seminorm(const SequenceFamily& fam, const CoefVector& f) {
  const CVector a = analysis(fam, f);
  return std::sqrt(kernels::norm_sq({a.data(), static_cast<std::size_t>(a.size())}));
}

CoefVector from_rule(std::size_t n, const CoefficientRule& rule, Space label) {
  CVector v(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = rule(k + 1);
  return CoefVector(std::move(v), label);
}

RangeMembership range_membership(const BasisRule& rule, const CoefficientRule& psi,
                                 const std::vector<std::size_t>& ladder,
                                 const TrendRule& trend) {
  validate_ladder(ladder);
  struct Point {
    double sq_sum;
    double residual;
  };
  const auto points = map_ladder(ladder, [&](std::size_t n) {
    const RieszLikeBasis basis = rule(n);
    if (basis.family.dim() != n) throw DimensionError("basis rule returned the wrong dimension");
    const CoefVector target = from_rule(n, psi, Space::Ddual);
    const VOperatorResult v = v_operator(basis.family, target);
    // h = Σ <Ψ, ξ_k> e_k, so T† h should give Ψ back
    const CoefVector image = adjoint_action(basis, CoefVector(v.coefficients));
    return Point{v.sq_sum, (image.coords - target.coords).cwiseAbs().maxCoeff()};
  });

  RangeMembership out;
  out.ladder = ladder;
  for (const auto& p : points) {
    out.sq_sums.push_back(p.sq_sum);
    out.preimage_residuals.push_back(p.residual);
  }
  out.note = kTruncationNote;
  const auto x = as_doubles(ladder);
  out.growth_slope = loglog_slope(x, out.sq_sums);
  std::vector<double> mids, incs;
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    mids.push_back(x[i]);
    incs.push_back(out.sq_sums[i] - out.sq_sums[i - 1]);
  }
  out.increment_slope = loglog_slope(mids, incs);

  if (ladder.size() < trend.min_points) {
    out.in_range = Verdict::inconclusive;
    return out;
  }
  const bool no_growth = std::all_of(incs.begin(), incs.end(), [&](double d) {
    return std::abs(d) <= 1e-14 * std::max(1.0, std::abs(out.sq_sums.back()));
  });
  if (no_growth) {
    out.in_range = Verdict::pass;
    return out;
  }
  const SlopeSide growth = std::isnan(out.growth_slope)
                               ? SlopeSide::straddle
                               : compare_slope(out.growth_slope, trend.threshold, trend.straddle);
  const SlopeSide decay = std::isnan(out.increment_slope)
                              ? SlopeSide::straddle
                              : compare_slope(out.increment_slope, -trend.threshold, trend.straddle);
  if (growth == SlopeSide::above) out.in_range = Verdict::fail;
  else if (decay == SlopeSide::below && growth == SlopeSide::below) out.in_range = Verdict::pass;
  else out.in_range = Verdict::inconclusive;
  return out;
}

RieszEquivalence check_riesz_equivalence(const SequenceFamily& fam, std::size_t samples,
                                         std::uint64_t seed, const Tolerances& tol) {
  const CMatrix& xi = fam.family();
  const CMatrix& z = fam.dual();
  if (xi.rows() != xi.cols()) throw DimensionError("equivalence check needs a square family");
  const RVector sv = singular_values(xi);
  if (!(sv(sv.size() - 1) > tol.rank * sv(0)))
    throw InjectivityError("family matrix is singular at this truncation");

  RieszEquivalence out;
  // S = Z Ξ^-1 computed as (Ξ^-* Z*)*
  const CMatrix s = xi.adjoint().partialPivLu().solve(z.adjoint()).adjoint();
  out.s = LinearMap(s).certified(fam.triplet(), {{1, -1}});
  out.biorthogonality = biorthogonality_residual(fam);
  out.hermitian_defect = max_abs(s - s.adjoint());

  const WeightedTriplet& tr = fam.triplet();
  const int levels = tr.levels();
  for (int j = 0; j <= levels; ++j)
    out.p_zeta_constants.push_back(largest_singular_value(tr.from_level_right(z.adjoint(), j)));
  out.p_zeta_sampled.assign(out.p_zeta_constants.size(), 0.0);

  Rng rng(seed);
  double worst_scaled = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const CVector a = rng.complex_vector(fam.count());
    const CoefVector f(xi * a, Space::D);
    const cplx q = pairing(CoefVector(s * f.coords), f);
    const double target = a.squaredNorm();
    const double dev = q.real() - target;
    const double scaled = std::abs(dev) / std::max(1.0, target);
    if (scaled > worst_scaled) {
      worst_scaled = scaled;
      out.positivity = dev;
    }
    out.positivity_imag = std::max(out.positivity_imag, std::abs(q.imag()));
    const double pz = p_zeta_seminorm(fam, f);
    for (int j = 0; j <= levels; ++j) {
      const double pj = seminorm(tr, f, j);
      if (pj > 0.0)
        out.p_zeta_sampled[static_cast<std::size_t>(j)] =
            std::max(out.p_zeta_sampled[static_cast<std::size_t>(j)], pz / pj);
    }
  }
  for (int j = 0; j <= levels; ++j) {
    if (out.p_zeta_constants[static_cast<std::size_t>(j)] <= tol.ratio_bound) {
      out.p_zeta_level = j;
      break;
    }
  }

  if (fam.tainted()) {
    out.verdict = Verdict::tainted;
    out.note = "dual violates the biorthogonality tolerance";
  } else if (worst_scaled <= tol.identity && out.positivity_imag <= tol.identity * fam.count() * 10 &&
             out.p_zeta_level) {
    out.verdict = Verdict::pass;
    out.note = "biorthogonal dual, positive S and continuous p_zeta found at this truncation";
  } else {
    out.verdict = Verdict::fail;
    out.note = out.p_zeta_level ? "positivity identity violated"
                                : "p_zeta is not dominated by any seminorm level within the ratio bound";
  }
  return out;
}

LinearMap positive_square_root(const LinearMap& s) {
  const CMatrix& m = s.matrix();
  if (m.rows() != m.cols()) throw DimensionError("square root needs a square operator");
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const RVector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return LinearMap(eig.eigenvectors() * roots.cast<cplx>().asDiagonal() *
                   eig.eigenvectors().adjoint());
}

StrictnessConstants strictness_constants(const SequenceFamily& fam) {
  const WeightedTriplet& tr = fam.triplet();
  StrictnessConstants c;
  const double lo = smallest_singular_value(tr.to_level(fam.family(), 1));
  c.lower = lo * lo;
  for (int q = 0; q <= tr.levels(); ++q) {
    const double hi = largest_singular_value(tr.to_level(fam.family(), q));
    c.upper.push_back(hi * hi);
  }
  return c;
}

StrictnessReport strictness_report(const FamilyRule& rule, const std::vector<std::size_t>& ladder,
                                   const TrendRule& trend) {
  validate_ladder(ladder);
  const auto consts = map_ladder(ladder, [&](std::size_t n) { return strictness_constants(rule(n)); });

  StrictnessReport out;
  out.ladder = ladder;
  out.note = std::string(kTruncationNote) +
             "; completeness of the family in D is taken as full rank at each N";
  std::size_t levels = consts.front().upper.size();
  for (const auto& c : consts) {
    if (c.upper.size() != levels) throw ValidationError("level count changes along the ladder");
  }
  out.upper.assign(levels, {});
  std::vector<double> inv_lower;
  bool degenerate = false;
  for (const auto& c : consts) {
    out.lower.push_back(c.lower);
    if (!(c.lower > 0.0)) degenerate = true;
    inv_lower.push_back(c.lower > 0.0 ? 1.0 / c.lower : std::numeric_limits<double>::infinity());
    for (std::size_t q = 0; q < levels; ++q) out.upper[q].push_back(c.upper[q]);
  }

  const auto x = as_doubles(ladder);
  out.inverse_lower_slope = degenerate ? std::numeric_limits<double>::infinity()
                                       : loglog_slope(x, inv_lower);
  for (std::size_t q = 0; q < levels; ++q) out.upper_slopes.push_back(loglog_slope(x, out.upper[q]));

  if (degenerate) {
    out.verdict = Verdict::non_strict;
    out.note += "; lower constant vanished (family not injective at some N)";
    return out;
  }
  if (ladder.size() < trend.min_points) {
    out.verdict = Verdict::inconclusive;
    out.note += "; too few ladder points for a trend verdict";
    return out;
  }
  std::vector<double> slopes = out.upper_slopes;
  slopes.push_back(out.inverse_lower_slope);
  bool any_above = false, any_straddle = false;
  for (double s : slopes) {
    if (std::isnan(s)) {
      any_straddle = true;
      continue;
    }
    switch (compare_slope(s, trend.threshold, trend.straddle)) {
    case SlopeSide::above:
      any_above = true;
      break;
    case SlopeSide::straddle:
      any_straddle = true;
      break;
    case SlopeSide::below:
      break;
    }
  }
  out.verdict = any_above ? Verdict::non_strict
                          : (any_straddle ? Verdict::inconclusive : Verdict::strict);
  return out;
}

StrictnessReport strictness_report(const BasisRule& rule, const std::vector<std::size_t>& ladder,
                                   const TrendRule& trend) {
  return strictness_report(FamilyRule([&](std::size_t n) { return rule(n).family; }), ladder, trend);
}

HilbertTriplet hilbert_triplet_realization(const RieszLikeBasis& basis) {
  if (basis.strictness != Verdict::strict)
    throw StateError(std::string("basis strictness is ") + to_string(basis.strictness) +
                     "; a Hilbert triplet is realized only for strict bases");
  const CMatrix& t = basis.t.matrix();
  Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeFullV);
  auto frame = std::make_shared<const CMatrix>(svd.matrixV());
  HilbertTriplet out{WeightedTriplet::relaxed(svd.singularValues(), frame, 1), 0.0, 0.0, {}};

  const CMatrix plus = out.triplet.to_level(basis.family.family(), 1);
  out.plus_gram_residual = max_abs_identity_defect(plus.adjoint() * plus);
  const CMatrix minus = out.triplet.to_level(basis.family.dual(), -1);
  out.minus_gram_residual = max_abs_identity_defect(minus.adjoint() * minus);
  for (Eigen::Index n = 0; n < basis.family.dual().cols(); ++n)
    out.dual_norms.push_back(dual_norm(out.triplet, CoefVector(basis.family.dual().col(n)), 1));
  return out;
}

} // namespace rigged
