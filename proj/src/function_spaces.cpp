#include "rigged/function_spaces.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "rigged/errors.hpp"
#include "rigged/kernels.hpp"

namespace rigged {

namespace {

constexpr double kSupportMass = 1e-12;
constexpr double kAliasingFraction = 1e-10;
constexpr std::size_t kMaxPoints = std::size_t{1} << 16;

bool is_power_of_two(std::size_t p) { return p != 0 && (p & (p - 1)) == 0; }

// FFTW plans are cached per size. Planning is not thread-safe, so it happens
// under the lock; execution uses the new-array interface on unaligned data.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, flags),
               fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags)};
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(n, p);
    return p;
  }

private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

CVector fft(const CVector& x, bool forward) {
  const PlanPair plans = plan_cache().get(static_cast<std::size_t>(x.size()));
  CVector in = x;
  CVector out(x.size());
  fftw_execute_dft(forward ? plans.forward : plans.backward, as_fftw(in.data()), as_fftw(out.data()));
  return out;
}

// Applies symbol[m] to DFT bin m and transforms back.
CVector apply_symbol(const CVector& values, const CVector& symbol) {
  CVector spec = fft(values, true);
  spec = spec.cwiseProduct(symbol);
  CVector back = fft(spec, false);
  back /= static_cast<double>(values.size());
  return back;
}

SampledFunction apply_real_symbol(const LineGrid& grid, const RVector& symbol,
                                  const SampledFunction& f) {
  CVector spec = fft(f.values, true);
  kernels::scale_inplace({spec.data(), static_cast<std::size_t>(spec.size())},
                         {symbol.data(), static_cast<std::size_t>(symbol.size())});
  CVector back = fft(spec, false);
  back /= static_cast<double>(f.values.size());
  return SampledFunction{grid, std::move(back)};
}

void require_grid(const LineGrid& grid, const SampledFunction& f) {
  if (!(f.grid == grid) || static_cast<std::size_t>(f.values.size()) != grid.points())
    throw DimensionError("sampled function does not live on the given grid");
}

double max_identity_defect(const std::vector<SampledFunction>& a,
                           const std::vector<SampledFunction>& b) {
  double worst = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m)
    for (std::size_t n = 0; n < b.size(); ++n)
      worst = std::max(worst, std::abs(inner(a[m], b[n]) - (m == n ? cplx(1.0) : cplx(0.0))));
  return worst;
}

} // namespace

LineGrid::LineGrid(double half_width, std::size_t points)
    : half_width_(half_width), points_(points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ValidationError("grid half-width must be positive");
  if (!is_power_of_two(points) || points < 2)
    throw ValidationError("grid point count must be a power of two");
}

LineGrid LineGrid::for_hermite(std::size_t count) {
  const double rule = 2.0 * std::sqrt(2.0 * static_cast<double>(count) + 1.0);
  return LineGrid(std::max(20.0, rule), 1024);
}

RVector LineGrid::nodes() const {
  RVector x(static_cast<Eigen::Index>(points_));
  for (std::size_t j = 0; j < points_; ++j) x(static_cast<Eigen::Index>(j)) = node(j);
  return x;
}

RVector LineGrid::frequencies() const {
  RVector y(static_cast<Eigen::Index>(points_));
  const double base = std::numbers::pi / half_width_; // 2π / (2L)
  const auto p = static_cast<long long>(points_);
  for (long long m = 0; m < p; ++m) {
    const long long signed_m = m < p / 2 ? m : m - p;
    y(static_cast<Eigen::Index>(m)) = base * static_cast<double>(signed_m);
  }
  return y;
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.grid == g.grid)) throw DimensionError("functions live on different grids");
  return f.grid.spacing() *
         kernels::pairing({f.values.data(), static_cast<std::size_t>(f.values.size())},
                          {g.values.data(), static_cast<std::size_t>(g.values.size())});
}

double l2_norm(const SampledFunction& f) {
  return std::sqrt(f.grid.spacing() *
                   kernels::norm_sq({f.values.data(), static_cast<std::size_t>(f.values.size())}));
}

double hermite_value(std::size_t n, double x) {
  const double phi0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return phi0;
  double prev = phi0;
  double cur = std::numbers::sqrt2 * x * phi0;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_tail_mass(std::size_t n, double half_width) {
  // |φ_n|² is even; integrate [L, L + 30] with the trapezoid rule
  constexpr double step = 5e-3;
  constexpr std::size_t steps = 6000;
  double acc = 0.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double v = hermite_value(n, half_width + step * static_cast<double>(i));
    acc += (i == 0 || i == steps ? 0.5 : 1.0) * v * v;
  }
  return 2.0 * step * acc;
}

std::vector<SampledFunction> hermite_basis(const LineGrid& grid, std::size_t count) {
  if (count == 0) throw ValidationError("hermite_basis needs at least one function");
  // mass outside the grid grows with n, but check every n so the error names the first offender
  for (std::size_t n = 0; n < count; ++n) {
    if (hermite_tail_mass(n, grid.half_width()) >= kSupportMass)
      throw SupportError("Hermite function " + std::to_string(n) +
                             " has mass >= 1e-12 outside [-L, L]; widen the grid",
                         n);
  }
  const auto p = static_cast<Eigen::Index>(grid.points());
  std::vector<SampledFunction> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.push_back({grid, CVector::Zero(p)});
  // run the recurrence once per node over all n
  for (Eigen::Index j = 0; j < p; ++j) {
    const double x = grid.node(static_cast<std::size_t>(j));
    double prev = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    out[0].values(j) = prev;
    if (count == 1) continue;
    double cur = std::numbers::sqrt2 * x * prev;
    out[1].values(j) = cur;
    for (std::size_t k = 1; k + 1 < count; ++k) {
      const double kk = static_cast<double>(k);
      const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
      prev = cur;
      cur = next;
      out[k + 1].values(j) = cur;
    }
  }
  return out;
}

SampledFunction sobolev_multiplier(const LineGrid& grid, double s, const SampledFunction& f) {
  require_grid(grid, f);
  if (s == 0.0) return f;
  const RVector y = grid.frequencies();
  RVector symbol(y.size());
  for (Eigen::Index m = 0; m < y.size(); ++m) symbol(m) = std::pow(1.0 + y(m) * y(m), 0.5 * s);
  return apply_real_symbol(grid, symbol, f);
}

SampledFunction spectral_derivative(const SampledFunction& f) {
  const RVector y = f.grid.frequencies();
  CVector symbol(y.size());
  for (Eigen::Index m = 0; m < y.size(); ++m) symbol(m) = cplx(0.0, y(m));
  // the Nyquist bin has no symmetric partner; zero it so real inputs stay real
  symbol(y.size() / 2) = 0.0;
  return SampledFunction{f.grid, apply_symbol(f.values, symbol)};
}

double high_band_fraction(const SampledFunction& f) {
  const CVector spec = fft(f.values, true);
  const RVector y = f.grid.frequencies();
  const double cutoff = 0.75 * std::numbers::pi / f.grid.spacing();
  double total = 0.0, high = 0.0;
  for (Eigen::Index m = 0; m < spec.size(); ++m) {
    const double e = std::norm(spec(m));
    total += e;
    if (std::abs(y(m)) >= cutoff) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

WeightedTriplet sobolev_triplet(const LineGrid& grid) {
  const std::size_t p = grid.points();
  const RVector y = grid.frequencies();
  RVector w(y.size());
  for (Eigen::Index m = 0; m < y.size(); ++m) w(m) = std::sqrt(1.0 + y(m) * y(m));
  // U(j, m) = exp(2πi jm/P)/√P so that U* is the unitary forward DFT
  std::vector<cplx> roots(p);
  for (std::size_t r = 0; r < p; ++r)
    roots[r] = std::polar(1.0 / std::sqrt(static_cast<double>(p)),
                          2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(p));
  auto frame = std::make_shared<CMatrix>(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t m = 0; m < p; ++m)
    for (std::size_t j = 0; j < p; ++j)
      (*frame)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = roots[(j * m) % p];
  return WeightedTriplet::with_unitary_frame(std::move(w), std::move(frame), 1);
}

CVector to_coordinates(const SampledFunction& f) { return std::sqrt(f.grid.spacing()) * f.values; }

SobolevBasis sobolev_basis(const LineGrid& grid, std::size_t count) {
  auto hermite = hermite_basis(grid, count);
  std::vector<SampledFunction> xi, zeta;
  xi.reserve(count);
  zeta.reserve(count);
  double construction = 0.0, high_band = 0.0;
  std::vector<double> ratios, norms;
  for (const auto& phi : hermite) {
    high_band = std::max(high_band, high_band_fraction(phi));
    SampledFunction x = sobolev_multiplier(grid, -1.0, phi);
    SampledFunction back = sobolev_multiplier(grid, 1.0, x);
    SampledFunction diff{grid, back.values - phi.values};
    construction = std::max(construction, l2_norm(diff));
    const double a = l2_norm(x);
    const double b = l2_norm(spectral_derivative(x));
    const double hilbert = l2_norm(back);
    ratios.push_back((a + b) / hilbert);
    norms.push_back(a);
    zeta.push_back(sobolev_multiplier(grid, 1.0, phi));
    xi.push_back(std::move(x));
  }

  std::vector<SampledFunction> lifted;
  lifted.reserve(count);
  for (const auto& x : xi) lifted.push_back(sobolev_multiplier(grid, 1.0, x));

  const auto p = static_cast<Eigen::Index>(grid.points());
  CMatrix fam(p, static_cast<Eigen::Index>(count)), dual(p, static_cast<Eigen::Index>(count));
  for (std::size_t n = 0; n < count; ++n) {
    fam.col(static_cast<Eigen::Index>(n)) = to_coordinates(xi[n]);
    dual.col(static_cast<Eigen::Index>(n)) = to_coordinates(zeta[n]);
  }

  SobolevBasis out{grid,
                   std::move(hermite),
                   std::move(xi),
                   SequenceFamily(std::move(fam), sobolev_triplet(grid), std::move(dual)),
                   construction,
                   0.0,
                   0.0,
                   std::move(ratios),
                   std::move(norms),
                   high_band};
  out.hermite_gram_residual = max_identity_defect(out.hermite, out.hermite);
  out.modified_gram_residual = max_identity_defect(lifted, lifted);
  return out;
}

SobolevBasis sobolev_basis(std::size_t count) {
  LineGrid grid = LineGrid::for_hermite(count);
  while (true) {
    bool support_ok = true;
    for (std::size_t n = 0; n < count && support_ok; ++n)
      support_ok = hermite_tail_mass(n, grid.half_width()) < kSupportMass;
    if (!support_ok) {
      if (2 * grid.points() > kMaxPoints)
        throw SupportError("no admissible grid up to 2^16 points", count - 1);
      grid = LineGrid(2.0 * grid.half_width(), 2 * grid.points());
      continue;
    }
    SobolevBasis b = sobolev_basis(grid, count);
    if (b.max_high_band < kAliasingFraction) return b;
    if (2 * grid.points() > kMaxPoints)
      throw SupportError("aliasing check still failing at 2^16 points", count - 1);
    grid = LineGrid(grid.half_width(), 2 * grid.points());
  }
}

namespace {

RVector index_weights(std::size_t n) {
  RVector w(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) w(static_cast<Eigen::Index>(k)) = static_cast<double>(k + 1);
  return w;
}

SequenceFamily number_operator_family(std::size_t n, int levels) {
  WeightedTriplet tr(index_weights(n), levels);
  const RVector w = index_weights(n);
  CMatrix xi = w.cwiseInverse().cast<cplx>().asDiagonal();
  CMatrix z = w.cast<cplx>().asDiagonal();
  return SequenceFamily(std::move(xi), std::move(tr), std::move(z));
}

} // namespace

std::vector<std::size_t> default_ladder(std::size_t n) {
  if (n == 0) throw ValidationError("dimension must be positive");
  return {n, 2 * n, 4 * n, 8 * n};
}

NumberOperatorModel number_operator_model(std::size_t n, int levels) {
  if (n == 0) throw ValidationError("dimension must be positive");
  WeightedTriplet tr(index_weights(n), levels);
  CMatrix t = index_weights(n).cast<cplx>().asDiagonal();
  RieszLikeBasis basis = make_riesz_like(LinearMap(std::move(t)), tr);
  const StrictnessReport rep = strictness_report(
      FamilyRule([levels](std::size_t m) { return number_operator_family(m, levels); }),
      default_ladder(n));
  basis.strictness = rep.verdict;
  return NumberOperatorModel{std::move(tr), std::move(basis)};
}

SchwartzHermiteModel schwartz_hermite_model(std::size_t n, int levels) {
  if (n == 0) throw ValidationError("dimension must be positive");
  WeightedTriplet tr(index_weights(n), levels);
  const auto nn = static_cast<Eigen::Index>(n);
  SequenceFamily fam(CMatrix::Identity(nn, nn), tr, CMatrix::Identity(nn, nn));
  return SchwartzHermiteModel{std::move(tr), std::move(fam)};
}

} // namespace rigged
