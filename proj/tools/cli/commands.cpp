#include "commands.hpp"

#include "descriptors.hpp"

#include "varleb/interp.hpp"
#include "varleb/maximal.hpp"
#include "varleb/norms.hpp"
#include "varleb/rk.hpp"
#include "varleb/weights.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace varleb::cli {

namespace {

json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string joined(const std::vector<std::string>& parts, const std::string& sep = "; ") {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

struct Common {
  std::string command;
  Box domain;
  int resolution;
  std::uint64_t seed;
  double relTol;
  int cubeDepth;
  bool shifted;

  Grid grid() const { return grid(resolution); }
  Grid grid(int res) const { return Grid::square(domain, res); }
  DyadicCubeSet cubes() const { return DyadicCubeSet(domain, cubeDepth, shifted); }
};

Common readCommon(Object& o, json* echo) {
  Common c{o.string("command"), Box::interval(0.0, 1.0), 0, 1, kDefaultRelTol, 5, false};
  if (const json* d = o.find("domain")) {
    c.domain = parseDomain(*d, o.path("domain"));
  } else if (echo) {
    (*echo)["domain"] = {0.0, 1.0};
  }
  c.resolution = o.integer("resolution", c.domain.dim() == 1 ? ExponentField::kDefaultResolution1d
                                                             : ExponentField::kDefaultResolution2d);
  if (c.resolution < 3) throw SchemaError(o.path("resolution"), "must be >= 3");
  const json* s = o.find("seed");
  if (s && !(s->is_number_unsigned() || (s->is_number_integer() && s->get<std::int64_t>() >= 0)))
    throw SchemaError(o.path("seed"), "expected a nonnegative integer");
  c.seed = s ? s->get<std::uint64_t>() : 1;
  if (!s && echo) (*echo)["seed"] = 1;
  c.relTol = o.number("rel_tol", kDefaultRelTol);
  if (!(c.relTol > 0.0 && c.relTol <= 1e-2)) throw SchemaError(o.path("rel_tol"), "must lie in (0, 1e-2]");
  c.cubeDepth = o.integer("cube_depth", 5);
  if (c.cubeDepth < 0 || c.cubeDepth > 12) throw SchemaError(o.path("cube_depth"), "must lie in [0, 12]");
  c.shifted = o.boolean("shifted_cubes", false);
  if (const json* out = o.find("output"); out && !out->is_string())
    throw SchemaError(o.path("output"), "expected a path");
  return c;
}

struct Run {
  json results = json::object();
  std::vector<std::string> warnings;
  int exitCode = 0;
  std::string summary;
};

json* echoElement(json* arr, std::size_t i) { return arr && arr->is_array() && i < arr->size() ? &(*arr)[i] : nullptr; }

std::vector<WeightField> readWeights(Object& o, const std::string& key, std::size_t m, const Grid& g, json* echo) {
  std::vector<WeightField> out;
  const json* v = o.find(key);
  if (!v) {
    if (echo) (*echo)[key] = json::array();
    for (std::size_t j = 0; j < m; ++j) {
      out.push_back(WeightField::unit(g));
      if (echo) (*echo)[key].push_back(1.0);
    }
    return out;
  }
  if (!v->is_array() || v->size() != m)
    throw SchemaError(o.path(key), "expected an array of " + std::to_string(m) + " weights");
  for (std::size_t j = 0; j < m; ++j)
    out.push_back(parseWeight((*v)[j], o.path(key) + "/" + std::to_string(j), echoElement(o.echoOf(key), j), g));
  return out;
}

WeightField readWeight(Object& o, const std::string& key, const Grid& g, json* echo) {
  if (const json* v = o.find(key)) return parseWeight(*v, o.path(key), o.echoOf(key), g);
  if (echo) (*echo)[key] = 1.0;
  return WeightField::unit(g);
}

json weightReport(const WeightConstantReport& r) {
  return {{"constant", num(r.constant)},
          {"overflow", r.overflow},
          {"argmax_cube", r.argmaxCube.str()},
          {"cube_set", r.cubeSet},
          {"convention", r.convention}};
}

json profileJson(const ConditionProfile& p) {
  json argmax = json::array();
  for (auto a : p.argmax) argmax.push_back(a);
  return {{"condition", p.condition},        {"parameter", nums(p.parameter)},
          {"sup_values", nums(p.supValues)}, {"argmax", argmax},
          {"threshold", num(p.threshold)},   {"verdict", verdictName(p.verdict)}};
}

json verdictJson(const RkVerdict& v) {
  json sizes = json::array();
  for (auto s : v.netSizes) sizes.push_back(s);
  return {{"verdict", v.verdict},
          {"failing_clauses", v.failingClauses},
          {"uniform_bound", profileJson(v.boundedness)},
          {"equicontinuity", profileJson(v.equicontinuity)},
          {"vanishing", profileJson(v.vanishing)},
          {"hypothesis_constant", num(v.hypothesisConstant)},
          {"diameter", num(v.diameter)},
          {"eps", nums(v.eps)},
          {"net_sizes", sizes},
          {"plateau", v.plateau},
          {"grows", v.grows}};
}

json quadrupleVerdictJson(const QuadrupleVerdict& v) {
  return {{"admissible", v.admissible()},
          {"proper", v.proper},
          {"gamma_deviation", num(v.gammaDeviation)},
          {"failures", v.failures}};
}

const std::string kLowerBound = "cube-set suprema are lower bounds for the true constant";

// --- norm / modular ---------------------------------------------------------------

void cmdNorm(Object& o, const Common& c, Run& run, json* echo, bool modularOnly) {
  const int dim = c.domain.dim();
  const PointFunction f = parseFunction(o.at("f"), o.path("f"), o.echoOf("f"), dim);
  const ExponentField p = parseExponent(o.at("p"), o.path("p"), o.echoOf("p"), c.domain);
  const json* wDesc = o.find("w");
  if (!wDesc && echo) (*echo)["w"] = 1.0;
  const bool envelope = o.boolean("envelope", true);
  o.finish();

  auto evaluate = [&](int res) {
    const Grid g = c.grid(res);
    const GridFunction F = GridFunction::sample(g, f);
    const WeightField w = wDesc ? parseWeight(*wDesc, o.path("w"), nullptr, g) : WeightField::unit(g);
    const Eigen::ArrayXd mag = F.magnitude() * w.values();
    if (modularOnly) return NormResult{modularOf(mag, p.sample(g), g.weights()), 0, 0.0, 0.0, 0.0};
    return luxemburgOf(mag, p.sample(g), g.weights(), c.relTol);
  };
  const NormResult r = evaluate(c.resolution);
  run.results["value"] = num(r.value);
  if (!modularOnly) {
    run.results["iterations"] = r.iterations;
    run.results["bracket"] = {num(r.bracketLo), num(r.bracketHi)};
    run.results["modular_at_value"] = num(r.modularAtValue);
  }
  if (envelope) {
    const int coarse = std::max(3, c.resolution % 2 ? (c.resolution + 1) / 2 : c.resolution / 2);
    const double v2 = evaluate(coarse).value;
    const double bound = std::max(2.0 * std::abs(r.value - v2), 10.0 * c.relTol * std::abs(r.value));
    run.results["envelope"] = {{"coarse_resolution", coarse}, {"coarse_value", num(v2)}, {"bound", num(bound)}};
  }
  run.summary = std::string(modularOnly ? "modular" : "norm") + " = " + fmt(r.value);
}

// --- weights ----------------------------------------------------------------------

void cmdWeightConstant(Object& o, const Common& c, Run& run, json* echo) {
  const Grid g = c.grid();
  const WeightField w = readWeight(o, "w", g, echo);
  const ExponentField p = parseExponent(o.at("p"), o.path("p"), o.echoOf("p"), c.domain);
  const std::string convention = o.string("convention", "symmetric");
  if (convention != "symmetric" && convention != "non_symmetric")
    throw SchemaError(o.path("convention"), "expected 'symmetric' or 'non_symmetric'");
  if (convention == "non_symmetric" && !p.isConstant())
    throw SchemaError(o.path("p"), "the non_symmetric convention needs a constant exponent");
  if (!p.isBanach()) throw SchemaError(o.path("p"), "weight constants need p- > 1");
  o.finish();

  const DyadicCubeSet cubes = c.cubes();
  const auto sym = apConstant(w, p, cubes, {c.relTol, false});
  if (convention == "symmetric") {
    run.results = weightReport(sym);
  } else {
    const double pc = *p.constantValue();
    run.results = weightReport(classicalApConstant(toNonSymmetric(w, p), pc, cubes));
    run.results["symmetric_constant"] = num(sym.constant);
  }
  run.results["cube_count"] = cubes.count();
  run.warnings.push_back(kLowerBound);
  if (sym.overflow) run.warnings.push_back("constant overflowed to +inf");
  run.summary = "weight constant (" + convention + ") = " + run.results["constant"].dump();
}

void cmdMultilinear(Object& o, const Common& c, Run& run, json* echo) {
  const Grid g = c.grid();
  const QuadrupleSpec spec = parseSpec(o.at("spec"), o.path("spec"), o.echoOf("spec"), c.domain);
  const auto ws = readWeights(o, "w", spec.p.size(), g, echo);
  o.finish();
  const QuadrupleVerdict verdict = validateQuadruple(spec);
  run.results["quadruple"] = quadrupleVerdictJson(verdict);
  if (!verdict.admissible()) {
    throw DomainError("quadruple is not admissible: " + joined(verdict.failures));
  }
  if (!verdict.proper) run.warnings.push_back("quadruple is admissible but not proper at the configured budget");
  const auto r = multilinearConstant(ws, spec, c.cubes(), {c.relTol, false});
  run.results["constant"] = weightReport(r);
  run.warnings.push_back(kLowerBound);
  if (r.overflow) run.warnings.push_back("constant overflowed to +inf");
  run.summary = "multilinear constant = " + num(r.constant).dump();
}

void cmdTwoToOne(Object& o, const Common& c, Run& run, json* echo) {
  const Grid g = c.grid();
  const WeightField w = readWeight(o, "w", g, echo);
  const QuadrupleSpec spec = parseSpec(o.at("spec"), o.path("spec"), o.echoOf("spec"), c.domain);
  if (spec.arity() != 1) throw SchemaError(o.path("spec") + "/p", "two-to-one needs a single exponent");
  const double tol = o.number("identity_tol", 1e-9);
  o.finish();
  const QuadrupleVerdict verdict = validateQuadruple(spec);
  if (!verdict.admissible()) throw DomainError("quadruple is not admissible: " + joined(verdict.failures));
  const auto r = twoToOneCheck(w, spec, c.cubes(), {c.relTol, false});
  run.results = {{"lhs", num(r.lhs)},
                 {"rhs", num(r.rhs)},
                 {"rel_error", num(r.relError)},
                 {"max_cube_rel_error", num(r.maxCubeRelError)},
                 {"a", num(r.a)},
                 {"t_minus", num(r.tMinus)},
                 {"t_plus", num(r.tPlus)},
                 {"holds", r.relError <= tol}};
  if (r.relError > tol) run.exitCode = 2;
  run.summary = "two-to-one: lhs = " + fmt(r.lhs) + ", rhs = " + fmt(r.rhs) + ", rel error = " + fmt(r.relError);
}

// --- maximal ----------------------------------------------------------------------

void cmdMaximal(Object& o, const Common& c, Run& run, json* echo) {
  const Grid g = c.grid();
  std::vector<PointFunction> corpus;
  if (o.has("f") == o.has("corpus")) throw SchemaError(o.pointer() + "/f", "give exactly one of 'f' and 'corpus'");
  if (const json* f = o.find("f")) corpus.push_back(parseFunction(*f, o.path("f"), o.echoOf("f"), g.dim()));
  if (const json* cs = o.find("corpus")) {
    if (!cs->is_array() || cs->empty()) throw SchemaError(o.path("corpus"), "expected a nonempty array");
    for (std::size_t i = 0; i < cs->size(); ++i)
      corpus.push_back(parseFunction((*cs)[i], o.path("corpus") + "/" + std::to_string(i),
                                     echoElement(o.echoOf("corpus"), i), g.dim()));
  }
  const ExponentField p = parseExponent(o.at("p"), o.path("p"), o.echoOf("p"), c.domain);
  const WeightField w = readWeight(o, "w", g, echo);
  const double qTilde = o.number("q_tilde", 1.0);
  if (!(qTilde > 0.0 && qTilde < p.pMinus())) throw SchemaError(o.path("q_tilde"), "need 0 < q_tilde < p-");
  RadiusSweep sweep;
  if (const json* r = o.find("radii"); r && r->is_array()) {
    sweep.radii = asNumbers(*r, o.path("radii"));
    for (std::size_t i = 0; i < sweep.radii.size(); ++i)
      if (!(sweep.radii[i] > 0.0) || (i && !(sweep.radii[i] > sweep.radii[i - 1])))
        throw SchemaError(o.path("radii"), "radii must be positive and increasing");
  } else {
    const int count = r ? asInteger(*r, o.path("radii")) : 64;
    if (!r && echo) (*echo)["radii"] = count;
    if (count < 1) throw SchemaError(o.path("radii"), "count must be >= 1");
    sweep = RadiusSweep::defaultFor(g, count);
  }
  const json* csv = o.find("csv");
  if (csv && !csv->is_string()) throw SchemaError(o.path("csv"), "expected a path");
  o.finish();

  std::vector<GridFunction> fs;
  for (const auto& f : corpus) fs.push_back(GridFunction::sample(g, f));
  const auto rep = maximalBoundednessProbe(p, w, qTilde, fs, sweep, c.cubes(), c.relTol);
  run.results = {{"ratios", nums(rep.ratios)},
                 {"max_ratio", num(rep.maxRatio)},
                 {"hypothesis_constant", num(rep.hypothesisConstant)},
                 {"radii", nums(sweep.radii)}};
  if (csv) writeCsv(maximalFunction(fs.front(), qTilde, sweep), csv->get<std::string>());
  run.warnings.push_back("the radius sweep gives a lower bound for the maximal function");
  run.summary = "maximal: max ratio = " + fmt(rep.maxRatio) + " over " + std::to_string(fs.size()) + " functions";
}

// --- rk ---------------------------------------------------------------------------

ClassifyConfig readClassifyKnobs(Object& o, const Common& c, int dim) {
  ClassifyConfig cfg;
  if (auto x0 = o.numbers("x0", std::nullopt)) {
    if (static_cast<int>(x0->size()) != dim) throw SchemaError(o.path("x0"), "wrong dimension");
    cfg.x0 = Eigen::Map<const Point>(x0->data(), dim);
  }
  if (auto r = o.numbers("radii", std::nullopt)) cfg.radii = *r;
  if (auto r = o.numbers("tail_radii", std::nullopt)) cfg.tailRadii = *r;
  cfg.epsLevels = o.integer("eps_levels", cfg.epsLevels);
  cfg.plateauLength = o.integer("plateau_length", cfg.plateauLength);
  cfg.thresholdFactor = o.number("threshold_factor", cfg.thresholdFactor);
  cfg.cubeDepth = c.cubeDepth;
  cfg.relTol = c.relTol;
  return cfg;
}

void cmdRk(Object& o, const Common& c, Run& run, json* echo) {
  Object fo = o.child("family");
  std::optional<RkCase> rk;
  if (fo.has("canonical")) {
    const std::string name = fo.string("canonical");
    const bool doubled = fo.boolean("doubled", false);
    fo.finish();
    for (const char* key : {"p", "w"})
      if (o.has(key)) throw SchemaError(o.path(key), "not allowed with a canonical family");
    try {
      rk = canonicalRkCase(name, doubled);
    } catch (const DomainError& e) {
      throw SchemaError(fo.path("canonical"), e.what());
    }
    rk->qTilde = o.number("q_tilde", rk->qTilde);
  } else {
    const Grid g = c.grid();
    FunctionFamily fam = parseFamily(o.at("family"), o.path("family"), o.echoOf("family"), g);
    const ExponentField p = parseExponent(o.at("p"), o.path("p"), o.echoOf("p"), c.domain);
    const WeightField w = readWeight(o, "w", g, echo);
    rk = RkCase{std::move(fam), p, w, o.number("q_tilde", 0.25)};
  }
  const ClassifyConfig cfg = readClassifyKnobs(o, c, rk->family.grid().dim());
  o.finish();
  const RkVerdict v = classify(rk->family, rk->p, rk->w, rk->qTilde, cfg);
  run.results = verdictJson(v);
  run.results["family"] = {{"label", rk->family.label}, {"size", rk->family.size()}};
  run.warnings.push_back("verdicts are finite-sample evidence, not proof");
  std::string clauses;
  for (const auto& f : v.failingClauses) clauses += (clauses.empty() ? "" : ", ") + f;
  run.summary = "rk-classify: " + v.verdict + (clauses.empty() ? "" : " (failing: " + clauses + ")");
}

// --- interp -----------------------------------------------------------------------

OperatorSpec readOperator(Object& o) {
  OperatorSpec op;
  try {
    op.kind = parseOperatorKind(o.string("kind"));
  } catch (const DomainError& e) {
    throw SchemaError(o.path("kind"), e.what());
  }
  op.arity = o.integer("arity", 1);
  op.alpha = o.number("alpha", 0.0);
  op.radius = o.number("radius", 0.0);
  o.finish();
  try {
    op.validate();
  } catch (const DomainError& e) {
    throw SchemaError(o.pointer(), e.what());
  }
  return op;
}

std::vector<ExponentField> readExponents(Object& o, const std::string& key, const Box& domain) {
  const json& v = o.at(key);
  if (!v.is_array() || v.empty()) throw SchemaError(o.path(key), "expected a nonempty array of exponents");
  std::vector<ExponentField> out;
  for (std::size_t j = 0; j < v.size(); ++j)
    out.push_back(parseExponent(v[j], o.path(key) + "/" + std::to_string(j), echoElement(o.echoOf(key), j), domain));
  return out;
}

Endpoint readEndpoint(Object o, const Common& c, const Grid& g, json* echo) {
  auto p = readExponents(o, "p", c.domain);
  const ExponentField q = parseExponent(o.at("q"), o.path("q"), o.echoOf("q"), c.domain);
  auto w = readWeights(o, "w", p.size(), g, echo);
  std::optional<WeightField> v;
  if (const json* vd = o.find("v")) v = parseWeight(*vd, o.path("v"), o.echoOf("v"), g);
  const double M = o.number("M", 0.0);
  o.finish();
  return Endpoint{std::move(p), q, std::move(w), std::move(v), M};
}

SimpleFunctionOptions readSimple(Object& o, json* echo) {
  SimpleFunctionOptions s;
  if (!o.has("simple")) {
    if (echo) (*echo)["simple"] = {{"max_pieces", s.maxPieces}, {"coefficient_lo", s.coefficientLo},
                                   {"coefficient_hi", s.coefficientHi}};
    o.find("simple");
    return s;
  }
  Object so = o.child("simple");
  s.maxPieces = so.integer("max_pieces", s.maxPieces);
  s.coefficientLo = so.number("coefficient_lo", s.coefficientLo);
  s.coefficientHi = so.number("coefficient_hi", s.coefficientHi);
  so.finish();
  if (s.maxPieces < 1 || !(s.coefficientLo > 0.0) || !(s.coefficientHi >= s.coefficientLo))
    throw SchemaError(so.pointer(), "need max_pieces >= 1 and 0 < coefficient_lo <= coefficient_hi");
  return s;
}

json simpleJson(const SimpleFunction& s) {
  json pieces = json::array();
  for (const auto& b : s.pieces) {
    json lo = json::array(), hi = json::array();
    for (Eigen::Index a = 0; a < b.lo.size(); ++a) {
      lo.push_back(b.lo(a));
      hi.push_back(b.hi(a));
    }
    pieces.push_back({{"lo", lo}, {"hi", hi}});
  }
  return {{"pieces", pieces}, {"coefficients", s.coefficients}};
}

void cmdInterp(Object& o, const Common& c, Run& run, json* echo) {
  const Grid g = c.grid();
  Object opObj = o.child("operator");
  const OperatorSpec op = readOperator(opObj);
  InterpolationExperiment exp{op, readEndpoint(o.child("endpoint0"), c, g, o.echoOf("endpoint0")),
                              readEndpoint(o.child("endpoint1"), c, g, o.echoOf("endpoint1"))};
  exp.theta = o.number("theta");
  if (!(exp.theta > 0.0 && exp.theta < 1.0)) throw SchemaError(o.path("theta"), "must lie in (0, 1)");
  exp.trials = o.integer("trials", 1000);
  if (exp.trials < 1) throw SchemaError(o.path("trials"), "must be >= 1");
  exp.seed = c.seed;
  exp.safety = o.number("safety", exp.safety);
  exp.slack = o.number("slack", exp.slack);
  exp.relTol = c.relTol;
  exp.simple = readSimple(o, echo);
  if (const json* qt = o.find("q_tilde")) exp.qTilde = asNumber(*qt, o.path("q_tilde"));
  exp.yRadius = o.number("y_radius", exp.yRadius);
  o.finish();
  if (static_cast<int>(exp.endpoint0.p.size()) != op.arity || static_cast<int>(exp.endpoint1.p.size()) != op.arity)
    throw SchemaError(o.path("operator") + "/arity", "operator arity does not match the endpoint exponents");

  const InterpolationReport r = exp.qTilde ? verifyMixedInterpolationBound(exp) : verifyInterpolationBound(exp);
  run.results = {{"mode", exp.qTilde ? "mixed" : "plain"},
                 {"observed_m0", num(r.observedM0)},
                 {"observed_m1", num(r.observedM1)},
                 {"certified_m0", num(r.certifiedM0)},
                 {"certified_m1", num(r.certifiedM1)},
                 {"inflated0", r.inflated0},
                 {"inflated1", r.inflated1},
                 {"bound", num(r.bound)},
                 {"worst_ratio", num(r.worstRatio)},
                 {"worst_trial", r.worstTrial},
                 {"violations", r.violations},
                 {"trials", r.trials}};
  if (!r.minimizedViolation.empty()) {
    json tuple = json::array();
    for (const auto& s : r.minimizedViolation) tuple.push_back(simpleJson(s));
    run.results["minimized_violation"] = {{"functions", tuple}, {"ratio", num(r.minimizedRatio)}};
    run.exitCode = 2;
  }
  if (r.inflated0 || r.inflated1) run.warnings.push_back("endpoint constants were inflated to the certified values");
  run.summary = "interp-verify: worst ratio " + fmt(r.worstRatio) + " vs bound " + fmt(r.bound) + ", " +
                std::to_string(r.violations) + " violations in " + std::to_string(r.trials) + " trials";
}

void cmdExtrapolate(Object& o, const Common& c, Run& run, json* echo) {
  const Grid g = c.grid();
  const auto ladder = o.numbers("theta_ladder");
  if (ladder.empty()) throw SchemaError(o.path("theta_ladder"), "expected at least one theta");
  const QuadrupleSpec target = parseSpec(o.at("target"), o.path("target"), o.echoOf("target"), c.domain);
  const auto w = readWeights(o, "w", target.p.size(), g, echo);
  Object e1 = o.child("endpoint1");
  const QuadrupleSpec spec1 = parseSpec(e1.at("spec"), e1.path("spec"), e1.echoOf("spec"), c.domain);
  const auto w1 = readWeights(e1, "w", spec1.p.size(), g, o.echoOf("endpoint1"));
  e1.finish();
  Object in = o.child("inputs");
  const FunctionFamily fam = parseFamily(in.at("family"), in.path("family"), in.echoOf("family"), g);
  std::vector<GridFunction> fixed;
  if (const json* fx = in.find("fixed")) {
    if (!fx->is_array()) throw SchemaError(in.path("fixed"), "expected an array of functions");
    for (std::size_t j = 0; j < fx->size(); ++j)
      fixed.push_back(GridFunction::sample(
          g, parseFunction((*fx)[j], in.path("fixed") + "/" + std::to_string(j), echoElement(in.echoOf("fixed"), j),
                           g.dim())));
  }
  in.finish();
  Object opObj = o.child("operator");
  const OperatorSpec op = readOperator(opObj);
  if (static_cast<int>(fixed.size()) + 1 != op.arity)
    throw SchemaError(o.path("inputs") + "/fixed", "need arity - 1 fixed inputs");
  WorkflowConfig cfg;
  cfg.trials = o.integer("trials", cfg.trials);
  cfg.qTilde = o.number("q_tilde", cfg.qTilde);
  cfg.seed = c.seed;
  cfg.cubeDepth = c.cubeDepth;
  cfg.relTol = c.relTol;
  cfg.simple = readSimple(o, echo);
  cfg.classify = readClassifyKnobs(o, c, g.dim());
  o.finish();

  CompactEndpoint compact{spec1, w1, {}};
  for (const auto& f : fam.members) {
    std::vector<GridFunction> tuple{f};
    tuple.insert(tuple.end(), fixed.begin(), fixed.end());
    compact.inputs.push_back(std::move(tuple));
  }
  const WorkflowReport rep = runExtrapolationWorkflow(ladder, target, w, compact, op, cfg);
  json entries = json::array();
  int compactCount = 0;
  for (const auto& e : rep.entries) {
    json j = {{"theta", e.theta}, {"built", e.built}, {"bounded", e.bounded}, {"observed_m0", num(e.observedM0)}};
    if (!e.error.empty()) j["error"] = e.error;
    if (e.family) {
      json pm = json::array();
      for (const auto& p : e.family->endpoint0.spec.p) pm.push_back(num(p.pMinus()));
      j["p0_minus"] = pm;
      j["q0_minus"] = num(e.family->endpoint0.spec.q.pMinus());
      j["quadruple0"] = quadrupleVerdictJson(e.family->verdict0);
      j["constant0"] = weightReport(e.family->constant0);
      j["round_trip_error"] = num(e.family->roundTripError);
    }
    if (e.verdict) {
      j["verdict"] = e.verdict->verdict;
      j["failing_clauses"] = e.verdict->failingClauses;
      if (e.verdict->verdict == "consistent-compact") ++compactCount;
    }
    entries.push_back(j);
  }
  run.results = {{"endpoint1_verdict", verdictJson(rep.endpoint1Verdict)}, {"entries", entries}};
  run.summary = "extrapolate: " + std::to_string(compactCount) + " of " + std::to_string(rep.entries.size()) +
                " theta values give consistent-compact";
}

using Handler = std::function<void(Object&, const Common&, Run&, json*)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"norm", [](Object& o, const Common& c, Run& r, json* e) { cmdNorm(o, c, r, e, false); }},
      {"modular", [](Object& o, const Common& c, Run& r, json* e) { cmdNorm(o, c, r, e, true); }},
      {"weight-constant", cmdWeightConstant},
      {"multilinear-constant", cmdMultilinear},
      {"two-to-one", cmdTwoToOne},
      {"maximal", cmdMaximal},
      {"rk-classify", cmdRk},
      {"interp-verify", cmdInterp},
      {"extrapolate", cmdExtrapolate},
  };
  return h;
}

}  // namespace

std::vector<std::string> commandNames() {
  std::vector<std::string> out;
  for (const auto& [k, v] : handlers()) out.push_back(k);
  return out;
}

json Overrides::apply(json config) const {
  if (!config.is_object()) throw SchemaError("/", "config must be a JSON object");
  if (seed) config["seed"] = *seed;
  if (resolution) config["resolution"] = *resolution;
  if (cubeDepth) config["cube_depth"] = *cubeDepth;
  if (tol) config["rel_tol"] = *tol;
  return config;
}

RunOutcome runCommand(const json& config, const Overrides& overrides) {
  const auto start = std::chrono::steady_clock::now();
  const json input = overrides.apply(config);
  json echo = input;
  Object o(input, "", &echo);
  const Common common = readCommon(o, &echo);
  const auto it = handlers().find(common.command);
  if (it == handlers().end()) throw SchemaError("/command", "unknown command '" + common.command + "'");
  Run run;
  it->second(o, common, run, &echo);

  RunOutcome out;
  out.exitCode = run.exitCode;
  out.summary = run.summary;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report = {{"schema_version", kReportSchema},
                {"command", common.command},
                {"config", echo},
                {"results", run.results},
                {"warnings", run.warnings},
                {"provenance", {{"tool_version", VARLEB_VERSION}, {"seed", common.seed}, {"wall_time_s", wall}}}};
  return out;
}

json reportBody(json report) {
  if (report.contains("provenance") && report["provenance"].is_object()) report["provenance"].erase("wall_time_s");
  return report;
}

ReplayOutcome replayReport(const json& report, const Overrides& overrides) {
  if (!report.is_object() || !report.contains("config")) throw SchemaError("/config", "report has no config echo");
  ReplayOutcome out;
  std::string version = "unknown";
  if (report.contains("provenance") && report["provenance"].contains("tool_version"))
    version = report["provenance"]["tool_version"].get<std::string>();
  if (version != VARLEB_VERSION)
    out.notes.push_back("VersionMismatch: report written by " + version + ", running " + VARLEB_VERSION);

  const json original = report["config"];
  out.run = runCommand(original, overrides);
  for (const auto& n : out.notes) out.run.report["warnings"].push_back(n);

  const json& before = report["results"];
  const json& after = out.run.report["results"];
  if (out.run.report["config"] == original) {
    out.match = before == after;
    out.notes.push_back(out.match ? "results identical" : "results differ under the same config");
  } else if (before.contains("envelope") && before["value"].is_number() && after["value"].is_number()) {
    const double diff = std::abs(after["value"].get<double>() - before["value"].get<double>());
    const double bound = before["envelope"]["bound"].get<double>();
    out.match = diff <= bound;
    out.notes.push_back("config changed; value moved by " + fmt(diff) + " against envelope " + fmt(bound));
  } else {
    out.match = true;
    out.notes.push_back("config changed; results not compared for this command");
  }
  return out;
}

}  // namespace varleb::cli
