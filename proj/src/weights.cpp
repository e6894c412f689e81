#include "varleb/weights.hpp"

#include "varleb/errors.hpp"
#include "varleb/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace varleb {

namespace {

void requireArity(std::span<const WeightField> ws, const QuadrupleSpec& spec) {
  if (static_cast<int>(ws.size()) != spec.arity() || spec.r.size() != spec.p.size())
    throw ArityMismatch("weights: " + std::to_string(ws.size()) + " weights for an arity-" +
                        std::to_string(spec.arity()) + " quadruple");
  if (ws.empty()) throw ArityMismatch("weights: empty weight vector");
}

Eigen::ArrayXd onGrid(const ExponentField& e, const Grid& g) { return e.sample(g); }

std::string quadrupleLabel(const QuadrupleSpec& spec) {
  std::ostringstream os;
  os << "m=" << spec.arity() << " gamma=" << spec.gamma << " r=(";
  for (std::size_t j = 0; j < spec.r.size(); ++j) os << (j ? "," : "") << spec.r[j];
  os << ") s=" << spec.s;
  return os.str();
}

}  // namespace

WeightConstantReport cubeSupremum(const Grid& grid, const DyadicCubeSet& cubes, double measurePower,
                                  std::span<const CubeFactor> factors, const CubeScanOptions& opt,
                                  std::string convention) {
  if (!grid.box().containsBox(cubes.root(), 1e-9))
    throw DomainError("cube scan: cube root box is not inside the grid box");
  for (const auto& f : factors)
    if (f.mag.size() != grid.size() || f.exps.size() != grid.size())
      throw DomainError("cube scan: factor size does not match grid");

  const std::vector<DyadicCube> all = cubes.enumerate();
  std::vector<double> values(all.size(), 0.0);
  std::vector<char> overflow(all.size(), 0);
  parallelFor(all.size(), [&](std::size_t i) {
    const RegionMask m = grid.mask(all[i].box);
    if (m.empty()) return;
    double logValue = measurePower * std::log(m.measure());
    for (const auto& f : factors) {
      const double n = luxemburgOf(m.gather(f.mag), m.gather(f.exps), m.weights, opt.relTol).value;
      if (!(n <= kOverflowThreshold)) {
        overflow[i] = 1;
        return;
      }
      if (n == 0.0) {
        values[i] = 0.0;
        return;
      }
      logValue += std::log(n);
    }
    values[i] = std::exp(logValue);
    if (!(values[i] <= kOverflowThreshold)) overflow[i] = 1;
  });

  WeightConstantReport rep;
  rep.cubeSet = cubes.describe();
  rep.convention = std::move(convention);
  std::size_t best = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (overflow[i]) {
      values[i] = kInfinity;
      if (!rep.overflow) best = i;
      rep.overflow = true;
    } else if (!rep.overflow && values[i] > values[best]) {
      best = i;
    }
  }
  rep.constant = rep.overflow ? kInfinity : (all.empty() ? 0.0 : values[best]);
  if (!all.empty()) rep.argmaxCube = all[best].id;
  if (opt.keepPerCube) rep.perCube = std::move(values);
  return rep;
}

WeightConstantReport apConstant(const WeightField& w, const ExponentField& p, const DyadicCubeSet& cubes,
                                const CubeScanOptions& opt) {
  if (!(p.pMinus() > 1.0)) throw DomainError("apConstant: requires p- > 1");
  const Grid& g = w.grid();
  const std::vector<CubeFactor> factors{{w.values(), onGrid(p, g)}, {w.values().inverse(), onGrid(dualExponent(p), g)}};
  return cubeSupremum(g, cubes, -1.0, factors, opt, "symmetric: |Q|^-1 ||w chi_Q||_p ||w^-1 chi_Q||_p'");
}

WeightField toNonSymmetric(const WeightField& w, const ExponentField& p) {
  return WeightField(GridFunction(w.grid(), w.values().pow(p.sample(w.grid()))));
}

WeightConstantReport classicalApConstant(const WeightField& u, double p, const DyadicCubeSet& cubes) {
  if (!(p > 1.0)) throw DomainError("classicalApConstant: requires p > 1");
  const Grid& g = u.grid();
  const double pDual = p / (p - 1.0);
  const Eigen::ArrayXd dualPart = u.values().pow(1.0 - pDual);
  const std::vector<DyadicCube> all = cubes.enumerate();
  WeightConstantReport rep;
  rep.cubeSet = cubes.describe();
  rep.convention = "non-symmetric: (avg u)(avg u^(1-p'))^(p-1)";
  rep.perCube.assign(all.size(), 0.0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const RegionMask m = g.mask(all[i].box);
    if (m.empty()) continue;
    const double a = (m.weights * m.gather(u.values())).sum() / m.measure();
    const double b = (m.weights * m.gather(dualPart)).sum() / m.measure();
    rep.perCube[i] = a * std::pow(b, p - 1.0);
    if (rep.perCube[i] > rep.perCube[best]) best = i;
  }
  rep.constant = all.empty() ? 0.0 : rep.perCube[best];
  rep.overflow = !(rep.constant <= kOverflowThreshold);
  if (rep.overflow) rep.constant = kInfinity;
  if (!all.empty()) rep.argmaxCube = all[best].id;
  return rep;
}

WeightConstantReport multilinearConstant(std::span<const WeightField> ws, const QuadrupleSpec& spec,
                                         const DyadicCubeSet& cubes, const CubeScanOptions& opt) {
  requireArity(ws, spec);
  const Grid& g = ws.front().grid();
  const WeightField nu = productWeight(ws);
  std::vector<CubeFactor> factors;
  factors.push_back({nu.values(), onGrid(reciprocalShift(spec.q, spec.invS()), g)});
  for (int j = 0; j < spec.arity(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    detail::requireSameGrid(g, ws[ju].grid(), "multilinearConstant");
    factors.push_back({ws[ju].values().inverse(), onGrid(reciprocalComplement(spec.r[ju], spec.p[ju]), g)});
  }
  const double power = spec.gamma - (1.0 / spec.rHarmonic() - spec.invS());
  return cubeSupremum(g, cubes, power, factors, opt, "multilinear " + quadrupleLabel(spec));
}

TwoToOneReport twoToOneCheck(const WeightField& w, const QuadrupleSpec& spec, const DyadicCubeSet& cubes,
                             const CubeScanOptions& opt) {
  if (spec.arity() != 1) throw ArityMismatch("twoToOneCheck: needs a 1-admissible quadruple");
  const double slackInv = 1.0 / spec.r[0] - spec.invS() - spec.gamma;
  if (!(slackInv > 0.0)) throw DomainError("twoToOneCheck: a = 1/(1/r - 1/s - gamma) must be positive");

  TwoToOneReport rep;
  rep.a = 1.0 / slackInv;
  // t = (1/a) * 1/(1/q - 1/s)
  const ExponentField at = reciprocalShift(spec.q, spec.invS());
  const ExponentField t = scaleExponent(at, 1.0 / rep.a);
  rep.tMinus = t.pMinus();
  rep.tPlus = t.pPlus();
  if (!(rep.tMinus > 1.0)) throw DomainError("twoToOneCheck: t- must exceed 1");

  const std::vector<WeightField> single{w};
  CubeScanOptions keep = opt;
  keep.keepPerCube = true;
  rep.lhsReport = multilinearConstant(single, spec, cubes, keep);
  rep.rhsReport = apConstant(w.pow(rep.a), t, cubes, keep);
  rep.lhs = rep.lhsReport.constant;
  rep.rhs = rep.rhsReport.overflow ? kInfinity : std::pow(rep.rhsReport.constant, 1.0 / rep.a);
  rep.relError = std::isfinite(rep.rhs) ? std::abs(rep.lhs - rep.rhs) / rep.rhs : (rep.lhs == rep.rhs ? 0.0 : kInfinity);
  for (std::size_t i = 0; i < rep.lhsReport.perCube.size(); ++i) {
    const double l = rep.lhsReport.perCube[i], r = std::pow(rep.rhsReport.perCube[i], 1.0 / rep.a);
    if (r > 0.0 && std::isfinite(r)) rep.maxCubeRelError = std::max(rep.maxCubeRelError, std::abs(l - r) / r);
  }
  if (!opt.keepPerCube) {
    rep.lhsReport.perCube.clear();
    rep.rhsReport.perCube.clear();
  }
  return rep;
}

InequalityReport containmentCheck(std::span<const WeightField> ws, const QuadrupleSpec& spec,
                                  const DyadicCubeSet& cubes, const CubeScanOptions& opt) {
  if (std::isinf(spec.s)) throw DomainError("containmentCheck: needs a finite s");
  QuadrupleSpec companion = spec;
  companion.s = kInfinity;
  InequalityReport rep;
  rep.lhs = multilinearConstant(ws, companion, cubes, opt).constant;
  rep.rhs = multilinearConstant(ws, spec, cubes, opt).constant;
  rep.constant = pairHolderConstant(ExponentField::constant(spec.q.domain(), spec.s), reciprocalShift(spec.q, spec.invS()));
  rep.ratio = rep.lhs / rep.rhs;
  rep.holds = rep.lhs <= rep.constant * rep.rhs * (1.0 + rep.slack);
  rep.notes.push_back("lhs: (r, inf) constant; rhs: (r, s) constant; constant = pair Holder constant of (s, 1/(1/q-1/s))");
  return rep;
}

BlendReport blendConstantCheck(std::span<const WeightField> w0, std::span<const WeightField> w1,
                               const QuadrupleSpec& spec0, const QuadrupleSpec& spec1, double theta,
                               const DyadicCubeSet& cubes, const CubeScanOptions& opt) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("blendConstantCheck: theta must lie in (0,1)");
  requireArity(w0, spec0);
  requireArity(w1, spec1);
  if (spec0.arity() != spec1.arity()) throw ArityMismatch("blendConstantCheck: endpoint arities differ");
  if (std::abs(spec0.gamma - spec1.gamma) > 1e-12) throw SpecMismatch("blendConstantCheck: endpoints have different gamma");
  if (spec0.s != spec1.s) throw SpecMismatch("blendConstantCheck: endpoints have different s");
  for (std::size_t j = 0; j < spec0.r.size(); ++j)
    if (std::abs(spec0.r[j] - spec1.r[j]) > 1e-12) throw SpecMismatch("blendConstantCheck: endpoints have different r");

  const std::size_t m = spec0.p.size();
  std::vector<ExponentField> ps;
  std::vector<WeightField> ws;
  for (std::size_t j = 0; j < m; ++j) {
    ps.push_back(thetaBlend(spec0.p[j], spec1.p[j], theta));
    ws.push_back(geometricBlend(w0[j], w1[j], theta));
  }
  QuadrupleSpec blended{ps, thetaBlend(spec0.q, spec1.q, theta), spec0.r, spec0.s, spec0.gamma};

  const double s = spec0.invS();
  double constant = pairHolderConstant(ExponentField::reciprocalAffine(-(1 - theta) * s, {{1 - theta, spec0.q}}),
                                       ExponentField::reciprocalAffine(-theta * s, {{theta, spec1.q}}));
  for (std::size_t j = 0; j < m; ++j) {
    const double ir = 1.0 / spec0.r[j];
    constant *= pairHolderConstant(ExponentField::reciprocalAffine((1 - theta) * ir, {{-(1 - theta), spec0.p[j]}}),
                                   ExponentField::reciprocalAffine(theta * ir, {{-theta, spec1.p[j]}}));
  }

  const double c0 = multilinearConstant(w0, spec0, cubes, opt).constant;
  const double c1 = multilinearConstant(w1, spec1, cubes, opt).constant;
  InequalityReport ineq;
  ineq.lhs = multilinearConstant(ws, blended, cubes, opt).constant;
  ineq.rhs = std::pow(c0, 1.0 - theta) * std::pow(c1, theta);
  ineq.constant = constant;
  ineq.ratio = ineq.lhs / ineq.rhs;
  ineq.holds = ineq.lhs <= ineq.constant * ineq.rhs * (1.0 + ineq.slack);
  ineq.notes.push_back("constant = product of pair Holder constants over the m+1 factor splittings");
  return BlendReport{std::move(ineq), std::move(blended), std::move(ws), c0, c1};
}

ComponentwiseReport componentwiseCharacterize(std::span<const WeightField> ws, const QuadrupleSpec& spec,
                                              const DyadicCubeSet& cubes, const CubeScanOptions& opt) {
  requireArity(ws, spec);
  const double offset = 1.0 / spec.rHarmonic() - spec.invS();
  ComponentwiseReport rep;
  for (std::size_t j = 0; j < ws.size(); ++j) {
    const double inv = 1.0 / spec.r[j] - offset;
    if (!(inv > 0.0)) {
      std::ostringstream os;
      os << "componentwiseCharacterize: 1/sigma_" << j + 1 << " = " << inv << " is not positive";
      throw RangeError(os.str());
    }
    rep.inverseSigma.push_back(inv);
  }

  rep.componentsFinite = true;
  for (std::size_t j = 0; j < ws.size(); ++j) {
    const QuadrupleSpec comp{{spec.p[j]}, spec.p[j], {spec.r[j]}, 1.0 / rep.inverseSigma[j], 0.0};
    const std::vector<WeightField> single{ws[j]};
    rep.components.push_back(multilinearConstant(single, comp, cubes, opt));
    rep.componentsFinite = rep.componentsFinite && rep.components.back().finite();
  }
  const QuadrupleSpec nuSpec{{spec.pHarmonic()}, spec.q, {spec.rHarmonic()}, spec.s, spec.gamma};
  const std::vector<WeightField> nu{productWeight(ws)};
  rep.nu = multilinearConstant(nu, nuSpec, cubes, opt);
  rep.componentsFinite = rep.componentsFinite && rep.nu.finite();
  rep.aggregate = multilinearConstant(ws, spec, cubes, opt);
  rep.aggregateFinite = rep.aggregate.finite();
  return rep;
}

}  // namespace varleb
