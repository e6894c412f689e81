#include "varleb/interp.hpp"

#include "varleb/errors.hpp"
#include "varleb/maximal.hpp"
#include "varleb/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace varleb {

namespace {

Eigen::Index halfWidth(double r, double h) {
  auto k = static_cast<Eigen::Index>(std::floor(r / h));
  while (k > 0 && static_cast<double>(k) * h >= r) --k;
  while (static_cast<double>(k + 1) * h < r) ++k;
  return k;
}

GridFunction fractional1(const GridFunction& f, double alpha) {
  const Grid& g = f.grid();
  const Eigen::Index n = g.size();
  const double h = g.step(0);
  Eigen::ArrayXd ker(n);
  ker(0) = 0.0;
  for (Eigen::Index d = 1; d < n; ++d) ker(d) = std::pow(static_cast<double>(d) * h, alpha - 1.0);
  const Eigen::ArrayXd fw = f.values() * g.weights();
  Eigen::ArrayXd out(n);
  parallelFor(static_cast<std::size_t>(n), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) s += ker(std::abs(i - j)) * fw(j);
    out(i) = s;
  });
  return GridFunction(g, std::move(out));
}

GridFunction fractional2(const GridFunction& f1, const GridFunction& f2, double alpha) {
  const Grid& g = f1.grid();
  const Eigen::Index n = g.size();
  const double h = g.step(0);
  Eigen::ArrayXd ker(2 * n);
  ker(0) = 0.0;
  for (Eigen::Index d = 1; d < 2 * n; ++d) ker(d) = std::pow(static_cast<double>(d) * h, alpha - 2.0);
  const Eigen::ArrayXd a = f1.values() * g.weights(), b = f2.values() * g.weights();
  Eigen::ArrayXd out(n);
  parallelFor(static_cast<std::size_t>(n), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index dj = std::abs(i - j);
      double inner = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) inner += ker(dj + std::abs(i - k)) * b(k);
      s += a(j) * inner;
    }
    out(i) = s;
  });
  return GridFunction(g, std::move(out));
}

void requireArity(const Endpoint& e, int m, const char* what) {
  if (static_cast<int>(e.p.size()) != m || static_cast<int>(e.w.size()) != m)
    throw ArityMismatch(std::string(what) + ": endpoint exponents/weights do not match the operator arity");
}

double productNorm(std::span<const GridFunction> fs, std::span<const ExponentField> p,
                   std::span<const WeightField> w, double relTol) {
  double prod = 1.0;
  for (std::size_t j = 0; j < fs.size(); ++j) prod *= weightedNorm(fs[j], p[j], w[j], relTol).value;
  return prod;
}

struct TrialRatios {
  double r0 = 0.0, r1 = 0.0, blended = 0.0;
};

// Shared driver of the plain and mixed verifications. `outputNorm(Tf, q, v)` measures the
// operator output in the target space.
template <typename OutputNorm>
InterpolationReport runInterpolation(const InterpolationExperiment& exp, OutputNorm&& outputNorm) {
  exp.op.validate();
  const int m = exp.op.arity;
  requireArity(exp.endpoint0, m, "interpolation");
  requireArity(exp.endpoint1, m, "interpolation");
  if (exp.trials < 1) throw DomainError("interpolation: trials must be >= 1");
  const BlendedEndpoint mid = blendEndpoints(exp.endpoint0, exp.endpoint1, exp.theta);
  const WeightField v0 = exp.endpoint0.target(), v1 = exp.endpoint1.target();
  const Grid& g = exp.endpoint0.w.front().grid();

  std::mt19937_64 rng(exp.seed);
  std::vector<std::vector<SimpleFunction>> tuples(static_cast<std::size_t>(exp.trials));
  for (auto& t : tuples)
    for (int j = 0; j < m; ++j) t.push_back(randomSimpleFunction(g.box(), rng, exp.simple));

  auto ratiosOf = [&](const std::vector<SimpleFunction>& t, bool endpoints) {
    std::vector<GridFunction> fs;
    for (const auto& s : t) fs.push_back(s.on(g));
    const GridFunction out = applyOperator(exp.op, fs);
    TrialRatios r;
    const double nan = std::nan("");
    const double inMid = productNorm(fs, mid.p, mid.w, exp.relTol);
    r.blended = inMid > 0.0 ? outputNorm(out, mid.q, mid.v) / inMid : nan;
    if (endpoints) {
      const double in0 = productNorm(fs, exp.endpoint0.p, exp.endpoint0.w, exp.relTol);
      const double in1 = productNorm(fs, exp.endpoint1.p, exp.endpoint1.w, exp.relTol);
      r.r0 = in0 > 0.0 ? outputNorm(out, exp.endpoint0.q, v0) / in0 : nan;
      r.r1 = in1 > 0.0 ? outputNorm(out, exp.endpoint1.q, v1) / in1 : nan;
    }
    return r;
  };

  std::vector<TrialRatios> all(tuples.size());
  parallelFor(tuples.size(), [&](std::size_t i) { all[i] = ratiosOf(tuples[i], true); });

  InterpolationReport rep;
  rep.trials = exp.trials;
  for (const auto& r : all) {
    if (!std::isnan(r.r0)) rep.observedM0 = std::max(rep.observedM0, r.r0);
    if (!std::isnan(r.r1)) rep.observedM1 = std::max(rep.observedM1, r.r1);
  }
  rep.certifiedM0 = std::max(exp.endpoint0.M, exp.safety * rep.observedM0);
  rep.certifiedM1 = std::max(exp.endpoint1.M, exp.safety * rep.observedM1);
  rep.inflated0 = rep.certifiedM0 > exp.endpoint0.M;
  rep.inflated1 = rep.certifiedM1 > exp.endpoint1.M;
  rep.bound = std::pow(rep.certifiedM0, 1.0 - exp.theta) * std::pow(rep.certifiedM1, exp.theta);
  const double limit = rep.bound * (1.0 + exp.slack);

  for (std::size_t i = 0; i < all.size(); ++i) {
    const double r = all[i].blended;
    rep.ratios.push_back(r);
    if (std::isnan(r)) continue;
    if (r > rep.worstRatio) {
      rep.worstRatio = r;
      rep.worstTrial = i;
    }
    if (r > limit) ++rep.violations;
  }

  if (rep.violations > 0) {
    // Halve single coefficients while the violation persists.
    auto tuple = tuples[rep.worstTrial];
    double ratio = rep.worstRatio;
    for (int pass = 0; pass < 30; ++pass) {
      bool changed = false;
      for (auto& s : tuple)
        for (auto& c : s.coefficients) {
          if (c == 0.0) continue;
          const double keep = c;
          c *= 0.5;
          const double r = ratiosOf(tuple, false).blended;
          if (r > limit) {
            ratio = r;
            changed = true;
          } else {
            c = keep;
          }
        }
      if (!changed) break;
    }
    rep.minimizedViolation = std::move(tuple);
    rep.minimizedRatio = ratio;
  }
  return rep;
}

WeightField powWeight(const WeightField& w, double s) { return w.pow(s); }

}  // namespace

const char* operatorName(OperatorKind k) {
  switch (k) {
    case OperatorKind::PointwiseProduct: return "pointwise_product";
    case OperatorKind::FractionalKernel: return "fractional_kernel";
    default: return "ball_average_product";
  }
}

OperatorKind parseOperatorKind(const std::string& name) {
  for (auto k : {OperatorKind::PointwiseProduct, OperatorKind::FractionalKernel, OperatorKind::BallAverageProduct})
    if (name == operatorName(k)) return k;
  throw DomainError("unknown operator kind '" + name + "'");
}

void OperatorSpec::validate() const {
  if (arity < 1) throw DomainError("operator: arity must be >= 1");
  if (kind == OperatorKind::FractionalKernel) {
    if (!(alpha > 0.0 && alpha < arity)) throw DomainError("operator: fractional alpha must lie in (0, m)");
    if (arity > 2) throw DomainError("operator: fractional kernel supports m <= 2");
  }
  if (kind == OperatorKind::BallAverageProduct && !(radius > 0.0))
    throw DomainError("operator: averaging radius must be positive");
}

GridFunction applyOperator(const OperatorSpec& op, std::span<const GridFunction> fs) {
  op.validate();
  if (static_cast<int>(fs.size()) != op.arity)
    throw ArityMismatch("applyOperator: expected " + std::to_string(op.arity) + " inputs, got " +
                        std::to_string(fs.size()));
  const Grid& g = fs.front().grid();
  for (const auto& f : fs) detail::requireSameGrid(g, f.grid(), "applyOperator");
  switch (op.kind) {
    case OperatorKind::PointwiseProduct: {
      Eigen::ArrayXd v = fs.front().values();
      for (std::size_t j = 1; j < fs.size(); ++j) v *= fs[j].values();
      return GridFunction(g, std::move(v));
    }
    case OperatorKind::FractionalKernel:
      if (g.dim() != 1) throw DomainError("applyOperator: fractional kernel is 1D only");
      return op.arity == 1 ? fractional1(fs[0], op.alpha) : fractional2(fs[0], fs[1], op.alpha);
    case OperatorKind::BallAverageProduct: {
      Eigen::ArrayXd v = ballMeans(fs.front(), op.radius).values();
      for (std::size_t j = 1; j < fs.size(); ++j) v *= ballMeans(fs[j], op.radius).values();
      return GridFunction(g, std::move(v));
    }
  }
  throw DomainError("applyOperator: unknown kind");
}

WeightField Endpoint::target() const {
  if (v) return *v;
  return productWeight(w);
}

BlendedEndpoint blendEndpoints(const Endpoint& e0, const Endpoint& e1, double theta) {
  if (e0.p.size() != e1.p.size() || e0.w.size() != e1.w.size() || e0.p.size() != e0.w.size())
    throw ArityMismatch("blendEndpoints: endpoints have different arities");
  std::vector<ExponentField> p;
  std::vector<WeightField> w;
  for (std::size_t j = 0; j < e0.p.size(); ++j) {
    p.push_back(thetaBlend(e0.p[j], e1.p[j], theta));
    w.push_back(geometricBlend(e0.w[j], e1.w[j], theta));
  }
  return {std::move(p), thetaBlend(e0.q, e1.q, theta), std::move(w),
          geometricBlend(e0.target(), e1.target(), theta)};
}

InterpolationReport verifyInterpolationBound(const InterpolationExperiment& exp) {
  return runInterpolation(exp, [&](const GridFunction& out, const ExponentField& q, const WeightField& v) {
    return weightedNorm(out, q, v, exp.relTol).value;
  });
}

std::pair<Eigen::ArrayXXd, Eigen::ArrayXd> differenceRows(const GridFunction& t, double yRadius) {
  const Grid& g = t.grid();
  if (g.dim() != 1) throw DomainError("differenceRows: 1D only");
  if (!(yRadius > 0.0)) throw DomainError("differenceRows: yRadius must be positive");
  const Eigen::Index n = g.size(), k = halfWidth(yRadius, g.step(0));
  Eigen::ArrayXXd rows(n, 2 * k + 1);
  const Eigen::ArrayXd& v = t.values();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index d = -k; d <= k; ++d) {
      const Eigen::Index j = i + d;
      rows(i, d + k) = v(i) - (j >= 0 && j < n ? v(j) : 0.0);
    }
  return {std::move(rows), Eigen::ArrayXd::Constant(2 * k + 1, g.step(0))};
}

InterpolationReport verifyMixedInterpolationBound(const InterpolationExperiment& exp) {
  if (!exp.qTilde) throw DomainError("verifyMixedInterpolationBound: qTilde not set");
  const double qt = *exp.qTilde;
  if (!(qt > 0.0 && qt < std::min(exp.endpoint0.q.pMinus(), exp.endpoint1.q.pMinus())))
    throw DomainError("verifyMixedInterpolationBound: need 0 < qTilde < min((q0)-, (q1)-)");
  return runInterpolation(exp, [&](const GridFunction& out, const ExponentField& q, const WeightField& v) {
    const auto [rows, yw] = differenceRows(out, exp.yRadius);
    return mixedNormRows(rows, yw, out.grid(), q, qt, &v, exp.relTol).value;
  });
}

ExtrapolationFamilyReport buildExtrapolationFamily(const QuadrupleSpec& target, const QuadrupleSpec& known1,
                                                   std::span<const WeightField> w, std::span<const WeightField> w1,
                                                   double theta, const DyadicCubeSet& cubes, std::optional<double> t) {
  const int m = target.arity();
  if (known1.arity() != m || static_cast<int>(w.size()) != m || static_cast<int>(w1.size()) != m)
    throw ArityMismatch("buildExtrapolationFamily: arities differ");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("buildExtrapolationFamily: theta must lie in (0,1)");

  QuadrupleSpec spec0{{}, thetaInvert(target.q, known1.q, theta), target.r, target.s, target.gamma};
  std::vector<WeightField> w0;
  for (int j = 0; j < m; ++j) {
    const auto J = static_cast<std::size_t>(j);
    spec0.p.push_back(thetaInvert(target.p[J], known1.p[J], theta));
    const Eigen::ArrayXd v = (w[J].values() * w1[J].values().pow(-theta)).pow(1.0 / (1.0 - theta));
    w0.emplace_back(GridFunction(w[J].grid(), v));
  }
  ExtrapolationFamilyReport rep{{spec0, std::move(w0)}, validateQuadruple(spec0), {}, std::nullopt, true, 0.0};

  // Round trip on the exponents' scan grid and on the weight grid.
  const Grid scan = target.q.scanGrid();
  auto relErr = [](const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) { return ((a - b).abs() / b.abs()).maxCoeff(); };
  double err = relErr(thetaBlend(spec0.q, known1.q, theta).sample(scan), target.q.sample(scan));
  for (int j = 0; j < m; ++j) {
    const auto J = static_cast<std::size_t>(j);
    err = std::max(err, relErr(thetaBlend(spec0.p[J], known1.p[J], theta).sample(scan), target.p[J].sample(scan)));
    err = std::max(err, relErr(geometricBlend(rep.endpoint0.w[J], w1[J], theta).values(), w[J].values()));
  }
  rep.roundTripError = err;

  rep.constant0.overflow = true;
  rep.constant0.constant = kInfinity;
  if (rep.verdict0.admissible()) rep.constant0 = multilinearConstant(rep.endpoint0.w, spec0, cubes, {kDefaultRelTol, false});

  if (t) {
    double pMin = kInfinity;
    for (const auto& p : spec0.p) pMin = std::min(pMin, p.pMinus());
    rep.tClause = *t > 0.0 && *t < pMin;
    if (rep.tClause && rep.verdict0.admissible()) {
      QuadrupleSpec scaled{{}, scaleExponent(spec0.q, 1.0 / *t), spec0.r, spec0.s, spec0.gamma * *t};
      std::vector<WeightField> wt;
      for (std::size_t j = 0; j < spec0.p.size(); ++j) {
        scaled.p.push_back(scaleExponent(spec0.p[j], 1.0 / *t));
        wt.push_back(powWeight(rep.endpoint0.w[j], *t));
      }
      rep.tConstant0 = multilinearConstant(wt, scaled, cubes, {kDefaultRelTol, false});
    }
  }
  return rep;
}

WorkflowReport runExtrapolationWorkflow(const std::vector<double>& thetaLadder, const QuadrupleSpec& target,
                                        std::span<const WeightField> w, const CompactEndpoint& compact,
                                        const OperatorSpec& op, const WorkflowConfig& config) {
  op.validate();
  if (target.arity() != op.arity) throw ArityMismatch("runExtrapolationWorkflow: operator arity differs from spec");
  if (compact.inputs.empty()) throw DomainError("runExtrapolationWorkflow: no compact-endpoint inputs");

  FunctionFamily outputs{"operator outputs", {}};
  for (const auto& in : compact.inputs) outputs.members.push_back(applyOperator(op, in));

  WorkflowReport rep;
  rep.endpoint1Verdict = classify(outputs, compact.spec.q, productWeight(compact.w), config.qTilde, config.classify);
  if (rep.endpoint1Verdict.verdict != "consistent-compact")
    throw HypothesisFailure("runExtrapolationWorkflow: outputs are not consistent-compact at endpoint 1 (" +
                            rep.endpoint1Verdict.verdict + ")");

  const Grid& g = w.front().grid();
  const DyadicCubeSet cubes(g.box(), config.cubeDepth);
  const WeightField nu = productWeight(w);
  std::optional<RkVerdict> targetVerdict;

  for (double theta : thetaLadder) {
    WorkflowEntry e;
    e.theta = theta;
    try {
      e.family = buildExtrapolationFamily(target, compact.spec, w, compact.w, theta, cubes);
      e.built = true;
    } catch (const RangeError& err) {
      e.error = err.what();
    } catch (const DomainError& err) {
      e.error = err.what();
    }
    if (e.built) {
      const auto& ep = e.family->endpoint0;
      const WeightField nu0 = productWeight(ep.w);
      std::mt19937_64 rng(config.seed);
      for (int k = 0; k < config.trials; ++k) {
        std::vector<GridFunction> fs;
        for (int j = 0; j < op.arity; ++j) fs.push_back(randomSimpleFunction(g.box(), rng, config.simple).on(g));
        const double in = productNorm(fs, ep.spec.p, ep.w, config.relTol);
        if (!(in > 0.0)) continue;
        e.observedM0 =
            std::max(e.observedM0, weightedNorm(applyOperator(op, fs), ep.spec.q, nu0, config.relTol).value / in);
      }
      e.bounded = std::isfinite(e.observedM0) && e.observedM0 < kOverflowThreshold;
      if (e.bounded) {
        if (!targetVerdict) targetVerdict = classify(outputs, target.q, nu, config.qTilde, config.classify);
        e.verdict = targetVerdict;
      }
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace varleb
