#include "rigged/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "rigged/errors.hpp"
#include "rigged/function_spaces.hpp"
#include "rigged/io.hpp"
#include "rigged/pseudo_hermitian.hpp"
#include "rigged/riesz.hpp"
#include "rigged/rng.hpp"

namespace rigged {

namespace {

constexpr double kSobolevConstruction = 1e-10;
constexpr double kGramTol = 1e-8;
constexpr double kAliasing = 1e-10;
constexpr double kHermiteValueTol = 1e-12;
constexpr double kSpectrumTol = 1e-8;

struct CommandName {
  Command command;
  const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::check_biorthogonal, "check-biorthogonal"},
    {Command::frame_report, "frame-report"},
    {Command::bessel, "bessel"},
    {Command::riesz_fischer, "riesz-fischer"},
    {Command::strictness, "strictness"},
    {Command::reconstruct, "reconstruct"},
    {Command::example, "example"},
    {Command::pseudo_hermitian, "pseudo-hermitian"},
    {Command::full_report, "full-report"},
};

// "name:value" rules
bool split_rule(const std::string& rule, const std::string& name, double& value) {
  const std::string prefix = name + ":";
  if (rule.rfind(prefix, 0) != 0) return false;
  const std::string rest = rule.substr(prefix.size());
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || !std::isfinite(value))
    throw ValidationError("bad parameter in rule '" + rule + "'");
  return true;
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || base.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (std::filesystem::path(base) / path).string();
}

std::uint64_t as_seed(const Json& v, const char* key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ValidationError(std::string(key) + " must be a non-negative integer");
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> known, const char* where) {
  for (const auto& [k, v] : obj.items()) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const char* n) { return k == n; });
    if (!ok) throw ValidationError(std::string("unknown key '") + k + "' in " + where);
  }
}

std::vector<std::size_t> ladder_from_json(const Json& v) {
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || e.get<std::int64_t>() <= 0)
      throw ValidationError("ladder entries must be positive integers");
    out.push_back(e.get<std::size_t>());
  }
  validate_ladder(out);
  return out;
}

RVector index_vector(std::size_t n) {
  RVector v(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = static_cast<double>(k + 1);
  return v;
}

RVector rule_weights(const std::string& rule, std::size_t n) {
  double a = 0.0;
  if (rule == "ones") return RVector::Ones(static_cast<Eigen::Index>(n));
  if (rule == "linear") return index_vector(n);
  if (split_rule(rule, "power", a)) {
    if (a < 0.0) throw ValidationError("power weight exponent must be >= 0");
    return index_vector(n).array().pow(a).matrix();
  }
  throw ValidationError("unknown weight_rule '" + rule + "'");
}

RVector lambda_values(const std::string& rule, std::size_t n) {
  double a = 0.0;
  if (rule == "index") return index_vector(n);
  if (split_rule(rule, "power", a)) return index_vector(n).array().pow(a).matrix();
  if (split_rule(rule, "constant", a)) return RVector::Constant(static_cast<Eigen::Index>(n), a);
  throw ValidationError("unknown lambda_rule '" + rule + "'");
}

CMatrix t_matrix(const std::string& rule, std::size_t n) {
  double a = 0.0;
  const auto nn = static_cast<Eigen::Index>(n);
  if (rule == "identity") return CMatrix::Identity(nn, nn);
  if (split_rule(rule, "diag-power", a))
    return index_vector(n).array().pow(a).matrix().cast<cplx>().asDiagonal();
  throw ValidationError("unknown T_rule '" + rule + "'");
}

CVector f_coefficients(const std::string& rule, std::size_t n) {
  double r = 0.0;
  if (rule == "ones") return CVector::Ones(static_cast<Eigen::Index>(n));
  if (rule == "linear") return index_vector(n).cast<cplx>();
  if (split_rule(rule, "geometric", r)) {
    CVector v(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = std::pow(r, static_cast<double>(k + 1));
    return v;
  }
  throw ValidationError("unknown f_rule '" + rule + "'");
}

// ---------------------------------------------------------------- model

struct Model {
  std::string source;
  std::optional<SequenceFamily> family;
  std::optional<RieszLikeBasis> basis;
  FamilyRule family_rule;
  BasisRule basis_rule;
  std::vector<std::size_t> ladder;
  std::string ladder_variable = "N";
  std::optional<NumberOperatorModel> number_op;
  std::optional<SobolevBasis> sobolev;
  std::optional<LineGrid> hermite_grid;
  std::string note;
};

WeightedTriplet config_triplet(const ModelSpec& spec, std::size_t n, const CMatrix* t) {
  if (spec.weights) {
    if (spec.weights->size() != n)
      throw DimensionError("weights list has " + std::to_string(spec.weights->size()) +
                           " entries, model dimension is " + std::to_string(n));
    RVector w = Eigen::Map<const RVector>(spec.weights->data(), static_cast<Eigen::Index>(n));
    return WeightedTriplet(std::move(w), spec.levels);
  }
  if (spec.weight_rule == "graph-norm") {
    if (!t) throw ValidationError("weight_rule graph-norm needs inputs.t");
    if (spec.levels != 1) throw ValidationError("graph-norm triplets have exactly one level");
    return graph_norm_triplet(LinearMap(*t));
  }
  return WeightedTriplet(rule_weights(spec.weight_rule, n), spec.levels);
}

SequenceFamily hermite_family(std::size_t count) {
  const LineGrid grid = LineGrid::for_hermite(count);
  const auto phi = hermite_basis(grid, count);
  CMatrix m(static_cast<Eigen::Index>(grid.points()), static_cast<Eigen::Index>(count));
  for (std::size_t n = 0; n < count; ++n) m.col(static_cast<Eigen::Index>(n)) = to_coordinates(phi[n]);
  CMatrix dual = m;
  return SequenceFamily(std::move(m), sobolev_triplet(grid), std::move(dual));
}

Model build_example(const RunConfig& cfg) {
  Model m;
  m.source = "example:" + cfg.example;
  const int levels = cfg.model.levels;
  if (cfg.example == "number-op" || cfg.example == "schwartz") {
    const std::size_t n = cfg.model.dim.value_or(4);
    m.ladder = cfg.model.ladder.empty() ? default_ladder(n) : cfg.model.ladder;
    if (cfg.example == "number-op") {
      m.number_op = number_operator_model(n, levels);
      m.basis = m.number_op->basis;
      m.basis_rule = [levels](std::size_t k) {
        WeightedTriplet tr(index_vector(k), levels);
        return make_riesz_like(LinearMap(index_vector(k).cast<cplx>().asDiagonal()), tr);
      };
    } else {
      m.basis_rule = [levels](std::size_t k) {
        WeightedTriplet tr(index_vector(k), levels);
        return make_riesz_like(LinearMap(CMatrix::Identity(static_cast<Eigen::Index>(k),
                                                          static_cast<Eigen::Index>(k))),
                               tr);
      };
      m.basis = m.basis_rule(n);
    }
    m.family = m.basis->family;
    m.family_rule = [rule = m.basis_rule](std::size_t k) { return rule(k).family; };
    return m;
  }
  if (cfg.example == "sobolev") {
    m.sobolev = sobolev_basis(cfg.count);
    m.family = m.sobolev->family;
    m.family_rule = [](std::size_t k) { return sobolev_basis(k).family; };
  } else if (cfg.example == "hermite") {
    m.hermite_grid = LineGrid::for_hermite(cfg.count);
    m.family = hermite_family(cfg.count);
    m.family_rule = [](std::size_t k) { return hermite_family(k); };
  } else {
    throw ValidationError("unknown example '" + cfg.example +
                          "' (expected hermite, sobolev, number-op or schwartz)");
  }
  if (levels != 1) throw ValidationError("the " + cfg.example + " example has exactly one level");
  m.ladder = cfg.model.ladder.empty() ? default_ladder(cfg.count) : cfg.model.ladder;
  m.ladder_variable = "M";
  return m;
}

Model build_from_inputs(const RunConfig& cfg) {
  Model m;
  const InputSpec& in = cfg.inputs;
  if (!in.t.empty() && !in.xi.empty())
    throw ValidationError("give either inputs.t or inputs.xi, not both");
  if (!in.t.empty()) {
    std::optional<Shape> shape;
    if (cfg.model.dim) shape = Shape{*cfg.model.dim, *cfg.model.dim};
    const CMatrix t = load_matrix(in.t, shape);
    if (t.rows() != t.cols()) throw DimensionError(in.t + ": T must be square");
    const WeightedTriplet tr = config_triplet(cfg.model, static_cast<std::size_t>(t.rows()), &t);
    m.basis = make_riesz_like(LinearMap(t), tr, cfg.tolerances);
    m.family = m.basis->family;
    m.source = "inputs:t";
  } else if (!in.xi.empty()) {
    CMatrix xi = load_matrix(in.xi);
    if (cfg.model.dim && static_cast<std::size_t>(xi.rows()) != *cfg.model.dim)
      throw DimensionError(in.xi + ": expected " + std::to_string(*cfg.model.dim) + " rows, got " +
                           std::to_string(xi.rows()));
    std::optional<CMatrix> dual;
    if (!in.zeta.empty()) dual = load_matrix(in.zeta, Shape{xi.rows(), xi.cols()});
    const WeightedTriplet tr = config_triplet(cfg.model, static_cast<std::size_t>(xi.rows()), nullptr);
    m.family = SequenceFamily(std::move(xi), tr, std::move(dual), cfg.tolerances.biorthogonality);
    m.source = "inputs:xi";
  } else {
    throw ValidationError("no model: give an example, inputs.t or inputs.xi");
  }
  if (!cfg.model.ladder.empty())
    m.note = "ladder ignored: matrices read from files define a single truncation";
  return m;
}

Model build_model(const RunConfig& cfg) {
  return cfg.example.empty() ? build_from_inputs(cfg) : build_example(cfg);
}

std::uint64_t require_seed(const RunConfig& cfg, const char* what) {
  if (!cfg.seed) throw ValidationError(std::string("a seed is required for ") + what);
  return *cfg.seed;
}

// Most family sections need a dual; attach the minimal-norm one when absent.
const SequenceFamily& family_with_dual(Model& m, const RunConfig& cfg) {
  if (!m.family) throw StateError("model has no sequence family");
  if (!m.family->has_dual()) {
    RieszFischerResult rf = riesz_fischer_check(*m.family, cfg.tolerances);
    if (!rf.completed) throw StateError("family has no dual and none could be attached: " + rf.note);
    m.family = *rf.completed;
    m.note += (m.note.empty() ? "" : "; ") + rf.note;
  }
  return *m.family;
}

Verdict trend_verdict(const std::vector<std::size_t>& ladder, const std::vector<double>& series,
                      const TrendRule& rule, double& slope) {
  slope = loglog_slope(as_doubles(ladder), series);
  if (ladder.size() < rule.min_points || std::isnan(slope)) return Verdict::inconclusive;
  switch (compare_slope(slope, rule.threshold, rule.straddle)) {
  case SlopeSide::below:
    return Verdict::pass;
  case SlopeSide::above:
    return Verdict::fail;
  case SlopeSide::straddle:
    break;
  }
  return Verdict::inconclusive;
}

Json certificates_json(const LinearMap& map) {
  Json out = Json::array();
  for (const auto& [pair, value] : map.certificates())
    out.push_back({{"from", pair.from}, {"to", pair.to}, {"norm", number(value)}});
  return out;
}

// ---------------------------------------------------------------- sections

Section section_model(const Model& m) {
  Section s("model");
  const SequenceFamily& fam = *m.family;
  s.set("source", m.source)
      .set("dim", fam.dim())
      .set("count", fam.count())
      .set("levels", fam.triplet().levels())
      .set("has_frame", fam.triplet().has_frame())
      .set("weights_min", number(fam.triplet().weights().minCoeff()))
      .set("weights_max", number(fam.triplet().weights().maxCoeff()));
  if (!m.ladder.empty()) s.set("ladder", to_json(m.ladder)).set("ladder_variable", m.ladder_variable);
  if (!m.note.empty()) s.set("note", m.note);
  return s;
}

Section section_biorthogonality(const SequenceFamily& fam) {
  Section s("biorthogonality");
  const double r = biorthogonality_residual(fam);
  s.set("residual", number(r)).set("tolerance", fam.biorthogonality_tol());
  s.verdict("biorthogonal", r <= fam.biorthogonality_tol() ? Verdict::pass : Verdict::fail,
            {{"residual", number(r)}, {"tolerance", fam.biorthogonality_tol()}});
  return s;
}

Section section_frame(const SequenceFamily& fam, const std::optional<CVector>& f,
                      const Tolerances& tol) {
  Section s("frame");
  const LinearMap op = frame_operator(fam);
  const CMatrix& z = fam.dual();
  // Z Z* and Z* Z share their nonzero spectrum; the small one is cheaper
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(z.adjoint() * z, Eigen::EigenvaluesOnly);
  RVector ev = eig.eigenvalues().reverse();
  const double lo = ev.size() ? ev(ev.size() - 1) : 0.0;
  const double hi = ev.size() ? ev(0) : 0.0;
  s.set("certificates", certificates_json(op)).set("spectrum", to_json(ev));
  if (f) {
    const CoefVector eta(*f, Space::D);
    s.set("analysis", to_json(analysis(fam, eta)));
    const CVector back = op.apply(*f);
    const CVector composed = synthesis(fam, analysis(fam, eta)).coords;
    s.set("synthesis_analysis_defect", number((back - composed).cwiseAbs().maxCoeff()));
  }
  s.verdict("positive", lo >= -tol.identity * std::max(1.0, hi) ? Verdict::pass : Verdict::fail,
            {{"min_eigenvalue", number(lo)}, {"max_eigenvalue", number(hi)}});
  return s;
}

Section section_bessel(Model& m, const RunConfig& cfg) {
  Section s("bessel");
  const SequenceFamily& fam = family_with_dual(m, cfg);
  const int levels = fam.triplet().levels();
  const std::uint64_t seed = require_seed(cfg, "the sampled Bessel supremum");
  std::vector<double> gamma, sampled;
  Rng rng(seed);
  for (int j = 1; j <= levels; ++j) {
    gamma.push_back(bessel_bound(fam, j));
    sampled.push_back(sampled_bessel_sup(fam, j, cfg.samples, rng));
  }
  const LinearMap w = bessel_w_factor(fam);
  s.set("gamma", to_json(gamma))
      .set("sampled_sup", to_json(sampled))
      .set("samples", cfg.samples)
      .set("w_certificates", certificates_json(w));
  bool below = true;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    below = below && sampled[i] <= gamma[i] * (1.0 + 1e-12) + 1e-300;
  s.verdict("sampled_below_bound", below ? Verdict::pass : Verdict::fail,
            {{"gamma", to_json(gamma)}, {"sampled_sup", to_json(sampled)}});

  if (m.family_rule && !m.ladder.empty()) {
    auto rule = m.family_rule;
    const auto series = map_ladder(m.ladder, [&](std::size_t n) { return bessel_bound(rule(n), 1); });
    double slope = 0.0;
    const Verdict v = trend_verdict(m.ladder, series, TrendRule{}, slope);
    s.set("ladder", to_json(m.ladder)).set("gamma_level1_ladder", to_json(series));
    s.verdict("bessel_like", v, {{"gamma_level1", to_json(series)}, {"slope", number(slope)}},
              kTruncationNote);
  } else {
    s.verdict("bessel_like", Verdict::inconclusive, {{"gamma", to_json(gamma)}},
              "single truncation: boundedness of gamma over N is not observable");
  }
  return s;
}

Section section_riesz_fischer(Model& m, const RunConfig& cfg) {
  Section s("riesz_fischer");
  const RieszFischerResult rf = riesz_fischer_check(*m.family, cfg.tolerances);
  s.set("rank", rf.rank).set("count", m.family->count()).set("residual", number(rf.residual));
  if (rf.s) s.set("certificates", certificates_json(*rf.s));
  s.verdict("riesz_fischer_like", rf.positive ? Verdict::pass : Verdict::fail,
            {{"rank", rf.rank}, {"count", m.family->count()}, {"residual", number(rf.residual)}},
            rf.note);
  if (!m.family->has_dual() && rf.completed) m.family = *rf.completed;
  return s;
}

Json strictness_json(const StrictnessReport& r) {
  Json upper = Json::array();
  for (const auto& u : r.upper) upper.push_back(to_json(u));
  return {{"ladder", to_json(r.ladder)},
          {"lower", to_json(r.lower)},
          {"upper", std::move(upper)},
          {"inverse_lower_slope", number(r.inverse_lower_slope)},
          {"upper_slopes", to_json(r.upper_slopes)}};
}

std::vector<Section> sections_strictness(Model& m, const RunConfig& cfg) {
  std::vector<Section> out;
  Section s("strictness");
  Verdict verdict = Verdict::inconclusive;
  if (m.family_rule && !m.ladder.empty()) {
    const StrictnessReport r = strictness_report(m.family_rule, m.ladder);
    verdict = r.verdict;
    s.set("ladder_variable", m.ladder_variable);
    const Json data = strictness_json(r);
    for (const auto& [k, v] : data.items()) s.set(k, v);
    s.verdict("strictness", r.verdict,
              {{"lower", to_json(r.lower)},
               {"upper_slopes", to_json(r.upper_slopes)},
               {"inverse_lower_slope", number(r.inverse_lower_slope)}},
              r.note);
  } else {
    const StrictnessConstants c = strictness_constants(*m.family);
    s.set("lower", number(c.lower)).set("upper", to_json(c.upper));
    s.verdict("strictness", Verdict::inconclusive,
              {{"lower", number(c.lower)}, {"upper", to_json(c.upper)}},
              "single truncation: a trend verdict needs a ladder");
  }
  out.push_back(std::move(s));

  if (m.basis && verdict == Verdict::strict) {
    const HilbertTriplet h = hilbert_triplet_realization(with_strictness(*m.basis, verdict));
    Section hs("hilbert_triplet");
    hs.set("plus_gram_residual", number(h.plus_gram_residual))
        .set("minus_gram_residual", number(h.minus_gram_residual))
        .set("dual_norms", to_json(h.dual_norms));
    const bool ok = h.plus_gram_residual <= cfg.tolerances.identity &&
                    h.minus_gram_residual <= cfg.tolerances.identity;
    hs.verdict("orthonormal_in_realized_spaces", ok ? Verdict::pass : Verdict::fail,
               {{"plus_gram_residual", number(h.plus_gram_residual)},
                {"minus_gram_residual", number(h.minus_gram_residual)},
                {"tolerance", cfg.tolerances.identity}});
    out.push_back(std::move(hs));
  }
  return out;
}

Section section_reconstruct(Model& m, const RunConfig& cfg) {
  Section s("reconstruct");
  const SequenceFamily& fam = family_with_dual(m, cfg);
  CVector f;
  std::string how;
  if (!cfg.inputs.f.empty()) {
    CMatrix raw = load_matrix(cfg.inputs.f);
    if (raw.cols() == 1) f = raw.col(0);
    else if (raw.rows() == 1) f = raw.row(0).transpose();
    else throw DimensionError(cfg.inputs.f + ": expected a single row or column");
    if (static_cast<std::size_t>(f.size()) != fam.dim())
      throw DimensionError(cfg.inputs.f + ": vector length " + std::to_string(f.size()) +
                           " does not match dimension " + std::to_string(fam.dim()));
    how = "inputs.f";
  } else if (fam.count() == fam.dim()) {
    f = f_coefficients(cfg.f_rule, fam.dim());
    how = "coordinates from " + cfg.f_rule;
  } else {
    f = fam.family() * f_coefficients(cfg.f_rule, fam.count());
    how = "expansion coefficients from " + cfg.f_rule;
  }
  const CoefVector fv(f, Space::D);
  std::vector<double> errors, ratios;
  for (std::size_t n = 0; n <= fam.count(); ++n)
    errors.push_back((f - partial_sum(fam, fv, n).coords).norm());
  for (std::size_t n = 1; n < errors.size(); ++n)
    ratios.push_back(errors[n - 1] > 0.0 ? errors[n] / errors[n - 1] : 0.0);
  const double weak = weak_expansion_residual(fam, fv, fv, fam.count());
  const double scale = std::max(1.0, f.squaredNorm());
  s.set("f_source", how)
      .set("error", to_json(errors))
      .set("error_ratio", to_json(ratios))
      .set("weak_residual", number(weak));
  std::vector<Evidence> ev{{"final_error", number(errors.back())},
                           {"weak_residual", number(weak)},
                           {"norm_sq", number(f.squaredNorm())}};
  if (fam.tainted()) {
    s.verdict("reconstruction", Verdict::tainted, std::move(ev),
              "dual violates the biorthogonality tolerance");
  } else {
    const bool ok = errors.back() <= cfg.tolerances.identity * std::sqrt(scale) &&
                    weak <= cfg.tolerances.identity * scale;
    s.verdict("reconstruction", ok ? Verdict::pass : Verdict::fail, std::move(ev));
  }
  return s;
}

Section section_equivalence(Model& m, const RunConfig& cfg) {
  Section s("equivalence");
  const SequenceFamily& fam = family_with_dual(m, cfg);
  const RieszEquivalence r =
      check_riesz_equivalence(fam, cfg.samples, require_seed(cfg, "the equivalence probe"), cfg.tolerances);
  s.set("biorthogonality", number(r.biorthogonality))
      .set("positivity", number(r.positivity))
      .set("positivity_imag", number(r.positivity_imag))
      .set("hermitian_defect", number(r.hermitian_defect))
      .set("p_zeta_constants", to_json(r.p_zeta_constants))
      .set("p_zeta_sampled", to_json(r.p_zeta_sampled))
      .set("s_certificates", certificates_json(r.s));
  if (r.p_zeta_level) s.set("p_zeta_level", *r.p_zeta_level);
  s.verdict("riesz_like", r.verdict,
            {{"positivity", number(r.positivity)},
             {"positivity_imag", number(r.positivity_imag)},
             {"p_zeta_constants", to_json(r.p_zeta_constants)}},
            r.note);
  return s;
}

Section section_schauder(Model& m, const RunConfig& cfg) {
  Section s("schauder");
  const SequenceFamily& fam = family_with_dual(m, cfg);
  const std::uint64_t seed = require_seed(cfg, "the Schauder probe");
  Json probes = Json::array();
  bool all = true;
  std::vector<Evidence> ev;
  for (int p = 0; p <= fam.triplet().levels(); ++p) {
    const SchauderProbe pr = schauder_inequality_probe(fam, p, cfg.samples, seed + static_cast<std::uint64_t>(p),
                                                       cfg.tolerances);
    Json j = {{"p_level", p}, {"worst_ratio", to_json(pr.worst_ratio)}, {"trials", pr.trials}};
    j["q_level"] = pr.q_level ? Json(*pr.q_level) : Json(nullptr);
    probes.push_back(j);
    all = all && pr.q_level.has_value();
    ev.push_back({"worst_ratio_p" + std::to_string(p), to_json(pr.worst_ratio)});
  }
  s.set("probes", std::move(probes)).set("ratio_bound", cfg.tolerances.ratio_bound);
  s.verdict("partial_sums_equicontinuous", all ? Verdict::pass : Verdict::inconclusive, std::move(ev),
            "randomized search; a missing level means no sampled witness within the ratio bound");
  return s;
}

Section section_range(const Model& m) {
  Section s("range");
  const auto one = range_membership(m.basis_rule, [](std::size_t) { return cplx(1.0); }, m.ladder);
  const auto lin = range_membership(m.basis_rule, [](std::size_t k) { return cplx(static_cast<double>(k)); },
                                    m.ladder);
  auto put = [&](const char* name, const RangeMembership& r) {
    s.set(name, {{"sq_sums", to_json(r.sq_sums)},
                 {"preimage_residuals", to_json(r.preimage_residuals)},
                 {"growth_slope", number(r.growth_slope)},
                 {"increment_slope", number(r.increment_slope)}});
    s.verdict(std::string("in_range_") + name, r.in_range,
              {{"sq_sums", to_json(r.sq_sums)},
               {"growth_slope", number(r.growth_slope)},
               {"increment_slope", number(r.increment_slope)}},
              r.note);
  };
  s.set("ladder", to_json(m.ladder));
  put("ones", one);
  put("linear", lin);
  return s;
}

Section section_number_op(const Model& m) {
  Section s("number_operator");
  const RieszLikeBasis& b = m.number_op->basis;
  const ConstructionResiduals r = construction_residuals(b);
  const StrictnessConstants c = strictness_constants(b.family);
  s.set("image_identity", number(r.image_identity))
      .set("dual_adjoint", number(r.dual_adjoint))
      .set("gram_to_dual", number(r.gram_to_dual))
      .set("lower", number(c.lower))
      .set("upper", to_json(c.upper))
      .set("t_certificates", certificates_json(b.t));
  s.verdict("strictness", b.strictness, {{"lower", number(c.lower)}, {"upper", to_json(c.upper)}},
            "verdict from the default ladder {N, 2N, 4N, 8N}");
  return s;
}

Section section_sobolev(const SobolevBasis& b) {
  Section s("sobolev");
  s.set("half_width", b.grid.half_width())
      .set("points", b.grid.points())
      .set("count", b.xi.size())
      .set("construction_residual", number(b.construction_residual))
      .set("hermite_gram_residual", number(b.hermite_gram_residual))
      .set("modified_gram_residual", number(b.modified_gram_residual))
      .set("norm_ratios", to_json(b.norm_ratios))
      .set("xi_norms", to_json(b.xi_norms))
      .set("max_high_band", number(b.max_high_band));
  auto check = [&](const char* name, double value, double limit) {
    s.verdict(name, value <= limit ? Verdict::pass : Verdict::fail,
              {{"value", number(value)}, {"limit", limit}});
  };
  check("construction", b.construction_residual, kSobolevConstruction);
  check("hermite_gram", b.hermite_gram_residual, kGramTol);
  check("modified_gram", b.modified_gram_residual, kGramTol);
  check("aliasing", b.max_high_band, kAliasing);
  const auto [lo, hi] = std::minmax_element(b.norm_ratios.begin(), b.norm_ratios.end());
  const bool eq = *lo >= 1.0 - 1e-9 && *hi <= std::numbers::sqrt2 + 1e-9;
  s.verdict("norm_equivalence", eq ? Verdict::pass : Verdict::fail,
            {{"min_ratio", number(*lo)}, {"max_ratio", number(*hi)}});
  return s;
}

Section section_hermite(const LineGrid& grid, std::size_t count) {
  Section s("hermite");
  const double c = std::pow(std::numbers::pi, -0.25);
  const double phi0 = hermite_value(0, 0.0);
  const double phi1 = hermite_value(1, 0.0);
  // closed forms at n <= 2 over the grid nodes
  double closed = 0.0;
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double x = grid.node(j);
    const double g = c * std::exp(-0.5 * x * x);
    closed = std::max({closed, std::abs(hermite_value(0, x) - g),
                       std::abs(hermite_value(1, x) - std::numbers::sqrt2 * x * g),
                       std::abs(hermite_value(2, x) - (2.0 * x * x - 1.0) / std::numbers::sqrt2 * g)});
  }
  const auto phi = hermite_basis(grid, count);
  double gram = 0.0;
  for (std::size_t m = 0; m < count; ++m)
    for (std::size_t n = 0; n < count; ++n)
      gram = std::max(gram, std::abs(inner(phi[m], phi[n]) - (m == n ? cplx(1.0) : cplx(0.0))));
  std::vector<double> tails;
  for (std::size_t n = 0; n < count; ++n) tails.push_back(hermite_tail_mass(n, grid.half_width()));
  s.set("phi0_at_0", phi0)
      .set("phi1_at_0", phi1)
      .set("closed_form_deviation", number(closed))
      .set("gram_residual", number(gram))
      .set("tail_mass", to_json(tails))
      .set("half_width", grid.half_width())
      .set("points", grid.points());
  const bool values = std::abs(phi0 - c) <= kHermiteValueTol && std::abs(phi1) <= kHermiteValueTol &&
                      closed <= kHermiteValueTol;
  s.verdict("values", values ? Verdict::pass : Verdict::fail,
            {{"phi0_at_0", phi0}, {"phi1_at_0", phi1}, {"closed_form_deviation", number(closed)}});
  s.verdict("gram", gram <= kGramTol ? Verdict::pass : Verdict::fail,
            {{"gram_residual", number(gram)}, {"limit", kGramTol}});
  return s;
}

double spectrum_deviation(const CMatrix& h, const RVector& lambda) {
  Eigen::ComplexEigenSolver<CMatrix> es(h, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  std::vector<double> ref(lambda.data(), lambda.data() + lambda.size());
  std::sort(ref.begin(), ref.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ev[i] - ref[i]));
  return worst;
}

std::vector<Section> sections_pseudo_hermitian(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg, "the weak-similarity probe");
  const std::uint64_t psi_seed = cfg.psi_seed.value_or(seed);
  std::vector<std::size_t> ladder = cfg.model.ladder;
  CMatrix psi_file;
  if (!cfg.inputs.psi.empty()) {
    psi_file = load_matrix(cfg.inputs.psi);
    if (psi_file.rows() != psi_file.cols()) throw DimensionError(cfg.inputs.psi + ": psi must be square");
    ladder = {static_cast<std::size_t>(psi_file.rows())};
  } else if (ladder.empty()) {
    ladder = cfg.model.dim ? std::vector<std::size_t>{*cfg.model.dim} : default_ladder(8);
  }

  struct Point {
    double eigen, weak, weak_rel, spectrum, non_normal, lower, upper;
    bool repeated;
  };
  const auto points = map_ladder(ladder, [&](std::size_t n) {
    CMatrix psi;
    if (psi_file.size()) psi = psi_file;
    else {
      Rng prng(psi_seed);
      psi = random_unitary(n, prng);
    }
    const CMatrix t = !cfg.inputs.t.empty() ? load_matrix(cfg.inputs.t, Shape{n, n}) : t_matrix(cfg.t_rule, n);
    const HamiltonianPair pair = build_pair(lambda_values(cfg.lambda_rule, n), psi, LinearMap(t));
    Rng rng(seed + n);
    double weak = 0.0, weak_rel = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const CVector x = rng.complex_vector(n);
      const CVector y = rng.complex_vector(n);
      const double r = weak_similarity_residual(pair, x, y);
      const double size = std::abs((pair.h_sa.apply(y)).dot(t * x));
      weak = std::max(weak, r);
      weak_rel = std::max(weak_rel, r / std::max(1.0, size));
    }
    // eigenbasis as a family in the graph-norm triplet of T, dual ζ_k = T* ψ_k
    SequenceFamily fam(pair.xi, graph_norm_triplet(pair.t), CMatrix(t.adjoint() * psi));
    const StrictnessConstants c = strictness_constants(fam);
    return Point{eigen_residual(pair), weak, weak_rel, spectrum_deviation(pair.h.matrix(), pair.eigenvalues),
                 non_normality(pair), c.lower, *std::max_element(c.upper.begin(), c.upper.end()),
                 pair.repeated_eigenvalues};
  });

  Section s("pseudo_hermitian");
  std::vector<double> eigen, weak, weak_rel, spec, nn, lower, upper;
  bool repeated = false;
  for (const auto& p : points) {
    eigen.push_back(p.eigen);
    weak.push_back(p.weak);
    weak_rel.push_back(p.weak_rel);
    spec.push_back(p.spectrum);
    nn.push_back(p.non_normal);
    lower.push_back(p.lower);
    upper.push_back(p.upper);
    repeated = repeated || p.repeated;
  }
  s.set("ladder", to_json(ladder))
      .set("lambda_rule", cfg.lambda_rule)
      .set("T_rule", cfg.inputs.t.empty() ? cfg.t_rule : "inputs.t")
      .set("psi_seed", psi_seed)
      .set("samples", cfg.samples)
      .set("eigen_residual", to_json(eigen))
      .set("weak_similarity_residual", to_json(weak))
      .set("weak_similarity_relative", to_json(weak_rel))
      .set("spectrum_deviation", to_json(spec))
      .set("non_normality", to_json(nn))
      .set("eigenbasis_lower", to_json(lower))
      .set("eigenbasis_upper", to_json(upper))
      .set("repeated_eigenvalues", repeated);
  const double tol = cfg.tolerances.identity;
  auto worst = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  s.verdict("eigen_relation", worst(eigen) <= tol ? Verdict::pass : Verdict::fail,
            {{"eigen_residual", to_json(eigen)}, {"tolerance", tol}});
  s.verdict("weak_similarity", worst(weak_rel) <= tol ? Verdict::pass : Verdict::fail,
            {{"weak_similarity_relative", to_json(weak_rel)}, {"tolerance", tol}});
  s.verdict("spectrum", worst(spec) <= kSpectrumTol ? Verdict::pass : Verdict::fail,
            {{"spectrum_deviation", to_json(spec)}, {"tolerance", kSpectrumTol}},
            repeated ? "repeated eigenvalues: eigenvectors are not unique" : "");
  double slope_lo = 0.0, slope_hi = 0.0;
  std::vector<double> inv_lower;
  for (double l : lower) inv_lower.push_back(l > 0.0 ? 1.0 / l : 0.0);
  const Verdict vl = trend_verdict(ladder, inv_lower, TrendRule{}, slope_lo);
  const Verdict vu = trend_verdict(ladder, upper, TrendRule{}, slope_hi);
  Verdict strict = Verdict::inconclusive;
  if (vl == Verdict::pass && vu == Verdict::pass) strict = Verdict::strict;
  else if (vl == Verdict::fail || vu == Verdict::fail) strict = Verdict::non_strict;
  s.verdict("eigenbasis_strictness", strict,
            {{"lower", to_json(lower)}, {"upper", to_json(upper)},
             {"inverse_lower_slope", number(slope_lo)}, {"upper_slope", number(slope_hi)}},
            kTruncationNote);

  std::vector<Section> out;
  out.push_back(std::move(s));
  if (cfg.inputs.t.empty()) {
    const DensityDiagnostic d =
        density_diagnostic([&](std::size_t n) { return t_matrix(cfg.t_rule, n); }, ladder);
    Section ds("density");
    ds.set("ladder", to_json(d.ladder))
        .set("rank", to_json(d.rank))
        .set("largest_angle", to_json(d.largest_angle))
        .set("adjoint_last_norm", to_json(d.adjoint_last_norm))
        .set("adjoint_norm", to_json(d.adjoint_norm))
        .set("slope", number(d.slope))
        .set("growing", d.growing);
    ds.verdict("admissible_set_benign", d.verdict,
               {{"adjoint_last_norm", to_json(d.adjoint_last_norm)}, {"slope", number(d.slope)}}, d.note);
    out.push_back(std::move(ds));
  }
  return out;
}

// ---------------------------------------------------------------- dispatch

class Runner {
public:
  Runner(const RunConfig& cfg, DiagnosticsReport& report) : cfg_(cfg), report_(report) {}

  template <class Fn>
  void add(Fn fn) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if constexpr (std::is_same_v<decltype(result), Section>) {
      result.set_elapsed_ms(ms);
      report_.sections.push_back(std::move(result));
    } else {
      for (auto& s : result) {
        s.set_elapsed_ms(ms / static_cast<double>(result.size()));
        report_.sections.push_back(std::move(s));
      }
    }
  }

private:
  const RunConfig& cfg_;
  DiagnosticsReport& report_;
};

std::optional<CVector> config_vector(const RunConfig& cfg, std::size_t n) {
  if (cfg.inputs.f.empty()) return std::nullopt;
  CMatrix raw = load_matrix(cfg.inputs.f);
  CVector f = raw.cols() == 1 ? CVector(raw.col(0)) : CVector(raw.row(0).transpose());
  if ((raw.cols() != 1 && raw.rows() != 1) || static_cast<std::size_t>(f.size()) != n)
    throw DimensionError(cfg.inputs.f + ": expected a vector of length " + std::to_string(n));
  return f;
}

void add_example_sections(Runner& run, Model& m) {
  if (m.number_op) run.add([&] { return section_number_op(m); });
  if (m.sobolev) run.add([&] { return section_sobolev(*m.sobolev); });
  if (m.hermite_grid) run.add([&] { return section_hermite(*m.hermite_grid, m.family->count()); });
}

} // namespace

const char* to_string(Command c) noexcept {
  for (const auto& e : kCommands)
    if (e.command == c) return e.name;
  return "?";
}

Command parse_command(const std::string& s) {
  for (const auto& e : kCommands)
    if (s == e.name) return e.command;
  throw ValidationError("unknown command '" + s + "'");
}

std::vector<std::size_t> parse_ladder(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string item = text.substr(start, comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw ValidationError("bad ladder entry '" + item + "'");
    out.push_back(v);
    start = comma + 1;
  }
  validate_ladder(out);
  return out;
}

void apply_tolerance_override(Tolerances& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ValidationError("tolerance override must be key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v))
    throw ValidationError("tolerance '" + key + "' needs a positive number");
  if (key == "biorthogonality") tol.biorthogonality = v;
  else if (key == "rank") tol.rank = v;
  else if (key == "ratio_bound") tol.ratio_bound = v;
  else if (key == "identity") tol.identity = v;
  else throw ValidationError("unknown tolerance '" + key + "'");
}

RunConfig parse_config(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(j,
                 {"command", "model", "inputs", "example", "count", "seed", "tolerances", "output",
                  "samples", "lambda_rule", "T_rule", "psi_seed", "N_ladder", "f_rule"},
                 "config");
  RunConfig c;
  try {
    if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
    if (j.contains("model")) {
      const Json& m = j.at("model");
      reject_unknown(m, {"dim", "ladder", "weights", "weight_rule", "levels"}, "model");
      if (m.contains("dim")) {
        if (!m.at("dim").is_number_integer() || m.at("dim").get<std::int64_t>() <= 0)
          throw ValidationError("model.dim must be a positive integer");
        c.model.dim = m.at("dim").get<std::size_t>();
      }
      if (m.contains("ladder")) c.model.ladder = ladder_from_json(m.at("ladder"));
      if (m.contains("weights") && m.contains("weight_rule"))
        throw ValidationError("give model.weights or model.weight_rule, not both");
      if (m.contains("weights")) c.model.weights = m.at("weights").get<std::vector<double>>();
      if (m.contains("weight_rule")) c.model.weight_rule = m.at("weight_rule").get<std::string>();
      if (m.contains("levels")) c.model.levels = m.at("levels").get<int>();
      if (c.model.levels < 1) throw ValidationError("model.levels must be >= 1");
    }
    if (j.contains("N_ladder")) {
      if (!c.model.ladder.empty()) throw ValidationError("give model.ladder or N_ladder, not both");
      c.model.ladder = ladder_from_json(j.at("N_ladder"));
    }
    if (j.contains("inputs")) {
      const Json& in = j.at("inputs");
      reject_unknown(in, {"xi", "zeta", "t", "f", "psi"}, "inputs");
      auto path = [&](const char* key) {
        return in.contains(key) ? resolve(base_dir, in.at(key).get<std::string>()) : std::string();
      };
      c.inputs = {path("xi"), path("zeta"), path("t"), path("f"), path("psi")};
    }
    if (j.contains("example")) c.example = j.at("example").get<std::string>();
    if (j.contains("count")) {
      if (!j.at("count").is_number_integer() || j.at("count").get<std::int64_t>() <= 0)
        throw ValidationError("count must be a positive integer");
      c.count = j.at("count").get<std::size_t>();
    }
    if (j.contains("seed")) c.seed = as_seed(j.at("seed"), "seed");
    if (j.contains("tolerances")) {
      for (const auto& [k, v] : j.at("tolerances").items())
        apply_tolerance_override(c.tolerances, k + "=" + format_double(v.get<double>()));
    }
    if (j.contains("output")) {
      const Json& o = j.at("output");
      reject_unknown(o, {"path", "format"}, "output");
      if (o.contains("path")) c.output.path = resolve(base_dir, o.at("path").get<std::string>());
      if (o.contains("format")) c.output.format = o.at("format").get<std::string>();
      parse_format(c.output.format);
    }
    if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
    if (j.contains("lambda_rule")) c.lambda_rule = j.at("lambda_rule").get<std::string>();
    if (j.contains("T_rule")) c.t_rule = j.at("T_rule").get<std::string>();
    if (j.contains("psi_seed")) c.psi_seed = as_seed(j.at("psi_seed"), "psi_seed");
    c.pseudo_hermitian = j.contains("lambda_rule") || j.contains("T_rule") || j.contains("psi_seed");
    if (j.contains("f_rule")) c.f_rule = j.at("f_rule").get<std::string>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    // byte offset only; recover line and column from the file text
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(path, line, col, "invalid JSON");
  }
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_config(j, base);
}

Json canonical_config(const RunConfig& c) {
  Json j;
  j["command"] = to_string(c.command);
  Json model = {{"ladder", c.model.ladder}, {"weight_rule", c.model.weight_rule}, {"levels", c.model.levels}};
  model["dim"] = c.model.dim ? Json(*c.model.dim) : Json(nullptr);
  model["weights"] = c.model.weights ? Json(*c.model.weights) : Json(nullptr);
  j["model"] = model;
  j["inputs"] = {{"xi", c.inputs.xi}, {"zeta", c.inputs.zeta}, {"t", c.inputs.t},
                 {"f", c.inputs.f}, {"psi", c.inputs.psi}};
  j["example"] = c.example;
  j["count"] = c.count;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["tolerances"] = {{"biorthogonality", c.tolerances.biorthogonality},
                     {"rank", c.tolerances.rank},
                     {"ratio_bound", c.tolerances.ratio_bound},
                     {"identity", c.tolerances.identity}};
  j["samples"] = c.samples;
  j["lambda_rule"] = c.lambda_rule;
  j["T_rule"] = c.t_rule;
  j["psi_seed"] = c.psi_seed ? Json(*c.psi_seed) : Json(nullptr);
  j["pseudo_hermitian"] = c.pseudo_hermitian;
  j["f_rule"] = c.f_rule;
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DiagnosticsReport run(const RunConfig& cfg) {
  DiagnosticsReport report;
  report.timing = cfg.timing;
  report.meta = {{"schema_version", kSchemaVersion},
                 {"tool_version", kToolVersion},
                 {"command", to_string(cfg.command)},
                 {"config_hash", config_hash(cfg)}};
  report.meta["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
  Runner r(cfg, report);

  if (cfg.command == Command::pseudo_hermitian) {
    r.add([&] { return sections_pseudo_hermitian(cfg); });
    return report;
  }

  Model m = build_model(cfg);
  report.meta["model"] = m.source;
  switch (cfg.command) {
  case Command::check_biorthogonal:
    r.add([&] { return section_biorthogonality(family_with_dual(m, cfg)); });
    break;
  case Command::frame_report:
    r.add([&] {
      const auto& fam = family_with_dual(m, cfg);
      return section_frame(fam, config_vector(cfg, fam.dim()), cfg.tolerances);
    });
    break;
  case Command::bessel:
    r.add([&] { return section_bessel(m, cfg); });
    break;
  case Command::riesz_fischer:
    r.add([&] { return section_riesz_fischer(m, cfg); });
    break;
  case Command::strictness:
    r.add([&] { return sections_strictness(m, cfg); });
    break;
  case Command::reconstruct:
    r.add([&] { return section_reconstruct(m, cfg); });
    break;
  case Command::example:
    if (cfg.example.empty()) throw ValidationError("command example needs an example name");
    r.add([&] { return section_model(m); });
    add_example_sections(r, m);
    r.add([&] { return sections_strictness(m, cfg); });
    if (m.basis_rule && m.number_op) r.add([&] { return section_range(m); });
    break;
  case Command::full_report: {
    r.add([&] { return section_model(m); });
    r.add([&] { return section_riesz_fischer(m, cfg); });
    r.add([&] { return section_biorthogonality(family_with_dual(m, cfg)); });
    r.add([&] {
      const auto& fam = family_with_dual(m, cfg);
      return section_frame(fam, config_vector(cfg, fam.dim()), cfg.tolerances);
    });
    r.add([&] { return section_bessel(m, cfg); });
    add_example_sections(r, m);
    r.add([&] { return sections_strictness(m, cfg); });
    r.add([&] { return section_reconstruct(m, cfg); });
    if (m.family->count() == m.family->dim()) r.add([&] { return section_equivalence(m, cfg); });
    r.add([&] { return section_schauder(m, cfg); });
    if (m.basis_rule && !m.ladder.empty()) r.add([&] { return section_range(m); });
    if (cfg.pseudo_hermitian) r.add([&] { return sections_pseudo_hermitian(cfg); });
    break;
  }
  case Command::pseudo_hermitian:
    break;
  }
  return report;
}

} // namespace rigged
