#include "varleb/rk.hpp"

#include "varleb/errors.hpp"
#include "varleb/maximal.hpp"
#include "varleb/parallel.hpp"
#include "varleb/weights.hpp"

#include <algorithm>
#include <cmath>

namespace varleb {

const Grid& FunctionFamily::grid() const {
  if (members.empty()) throw DomainError("family '" + label + "' is empty");
  return members.front().grid();
}

void FunctionFamily::validate() const {
  const Grid& g = grid();
  for (const auto& f : members) detail::requireSameGrid(g, f.grid(), "family");
}

namespace {

void requireCount(int count, const char* what) {
  if (count < 1) throw DomainError(std::string(what) + ": count must be >= 1");
}

Eigen::ArrayXd bumpKernel(double eps, double h) {
  const auto k = static_cast<Eigen::Index>(std::floor(eps / h));
  Eigen::ArrayXd ker(2 * k + 1);
  for (Eigen::Index j = -k; j <= k; ++j) {
    const double t = static_cast<double>(j) * h / eps;
    ker(j + k) = std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
  }
  return ker / ker.sum();
}

Eigen::ArrayXd convolveAxis(const Grid& g, const Eigen::ArrayXd& v, int axis, const Eigen::ArrayXd& ker) {
  const Eigen::Index k = (ker.size() - 1) / 2;
  if (k == 0) return v;
  const Eigen::Index n0 = g.resolution(0), n1 = g.dim() == 2 ? g.resolution(1) : 1;
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(v.size());
  for (Eigen::Index i = 0; i < n0; ++i)
    for (Eigen::Index j = 0; j < n1; ++j) {
      double s = 0.0;
      for (Eigen::Index d = -k; d <= k; ++d) {
        const Eigen::Index a = axis == 0 ? i + d : i, b = axis == 1 ? j + d : j;
        if (a < 0 || a >= n0 || b < 0 || b >= n1) continue;
        s += ker(d + k) * v(a * n1 + b);
      }
      out(i * n1 + j) = s;
    }
  return out;
}

// Per-member values in parallel, then sup with the first argmax.
template <typename F>
std::pair<double, std::size_t> supOver(std::size_t n, F&& value) {
  std::vector<double> vals(n, 0.0);
  parallelFor(n, [&](std::size_t i) { vals[i] = value(i); });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (vals[i] > vals[arg]) arg = i;
  return {n ? vals[arg] : 0.0, arg};
}

void checkDomain(const FunctionFamily& fam, const WeightField& w) {
  fam.validate();
  detail::requireSameGrid(fam.grid(), w.grid(), "family weight");
}

}  // namespace

FunctionFamily translateFamily(const Grid& grid, const PointFunction& base, int count, double step) {
  requireCount(count, "translateFamily");
  FunctionFamily fam{"translate", {}};
  for (int k = 0; k < count; ++k)
    fam.members.push_back(GridFunction::sample(grid, [&](const Point& x) {
      Point y = x;
      y(0) -= k * step;
      return base(y);
    }));
  return fam;
}

FunctionFamily dilateFamily(const Grid& grid, const PointFunction& base, int count, double step) {
  requireCount(count, "dilateFamily");
  const Point c = grid.box().center();
  FunctionFamily fam{"dilate", {}};
  for (int k = 0; k < count; ++k) {
    const double d = 1.0 + k * step;
    if (!(d > 0.0)) throw DomainError("dilateFamily: dilation factor must stay positive");
    fam.members.push_back(GridFunction::sample(grid, [&](const Point& x) { return base(Point(c + (x - c) / d)); }));
  }
  return fam;
}

FunctionFamily modulateFamily(const Grid& grid, const PointFunction& base, int count, double step) {
  requireCount(count, "modulateFamily");
  FunctionFamily fam{"modulate", {}};
  for (int k = 0; k < count; ++k) {
    const double freq = std::pow(2.0, k * step);
    fam.members.push_back(
        GridFunction::sample(grid, [&](const Point& x) { return base(x) * std::sin(freq * x(0)); }));
  }
  return fam;
}

FunctionFamily mollifyFamily(const Grid& grid, const PointFunction& base, int count, double step) {
  requireCount(count, "mollifyFamily");
  if (!(step > 0.0)) throw DomainError("mollifyFamily: step must be positive");
  const GridFunction f = GridFunction::sample(grid, base);
  FunctionFamily fam{"mollify", {}};
  for (int k = 0; k < count; ++k) {
    const double eps = step * std::pow(2.0, -k);
    Eigen::ArrayXd v = f.values();
    for (int a = 0; a < grid.dim(); ++a) v = convolveAxis(grid, v, a, bumpKernel(eps, grid.step(a)));
    fam.members.emplace_back(grid, std::move(v));
  }
  return fam;
}

const char* verdictName(ProfileVerdict v) {
  switch (v) {
    case ProfileVerdict::Pass: return "pass";
    case ProfileVerdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

ConditionProfile uniformBoundProfile(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                     double relTol) {
  checkDomain(fam, w);
  ConditionProfile prof{"uniform-bound", {0.0}, {}, {}, kOverflowThreshold, ProfileVerdict::Inconclusive};
  const auto [v, arg] =
      supOver(fam.size(), [&](std::size_t i) { return weightedNorm(fam.members[i], p, w, relTol).value; });
  prof.supValues = {v};
  prof.argmax = {arg};
  prof.verdict = std::isfinite(v) && v < kOverflowThreshold ? ProfileVerdict::Pass : ProfileVerdict::Fail;
  return prof;
}

ConditionProfile equicontinuityProfile(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                       double qTilde, const std::vector<double>& radii, double threshold,
                                       double relTol) {
  checkDomain(fam, w);
  if (!(qTilde > 0.0 && qTilde < p.pMinus())) throw DomainError("equicontinuityProfile: need 0 < qTilde < p-");
  if (radii.empty()) throw DomainError("equicontinuityProfile: empty radius sweep");
  ConditionProfile prof{"equicontinuity", radii, {}, {}, threshold, ProfileVerdict::Inconclusive};
  for (double r : radii) {
    std::vector<double> vals;
    for (const auto& f : fam.members)
      vals.push_back(weightedNorm(oscillationAverage(f, r, qTilde), p, w, relTol).value);
    const auto it = std::max_element(vals.begin(), vals.end());
    prof.supValues.push_back(*it);
    prof.argmax.push_back(static_cast<std::size_t>(it - vals.begin()));
  }
  const auto smallest = std::min_element(radii.begin(), radii.end()) - radii.begin();
  prof.verdict = prof.supValues[static_cast<std::size_t>(smallest)] <= threshold ? ProfileVerdict::Pass
                                                                                 : ProfileVerdict::Fail;
  return prof;
}

ConditionProfile vanishingProfile(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                  const Point& x0, const std::vector<double>& tailRadii, double threshold,
                                  double relTol) {
  checkDomain(fam, w);
  if (tailRadii.empty()) throw DomainError("vanishingProfile: empty R sweep");
  if (!std::is_sorted(tailRadii.begin(), tailRadii.end())) throw DomainError("vanishingProfile: R sweep must increase");
  const Grid& g = fam.grid();
  const Eigen::ArrayXd exps = p.sample(g);
  ConditionProfile prof{"vanishing", tailRadii, {}, {}, threshold, ProfileVerdict::Inconclusive};
  double running = kInfinity;
  for (double R : tailRadii) {
    const auto [v, arg] = supOver(fam.size(), [&](std::size_t i) {
      return restrictedNorm(fam.members[i].magnitude() * w.values(), exps, g, Ball{x0, R}, relTol, true).value;
    });
    running = std::min(running, v);
    prof.supValues.push_back(running);
    prof.argmax.push_back(arg);
  }
  prof.verdict = prof.supValues.back() <= threshold ? ProfileVerdict::Pass : ProfileVerdict::Fail;
  return prof;
}

ConditionProfile equiIntegrabilityMeasure(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                          const std::vector<Region>& shrinkingSets, double threshold,
                                          double relTol) {
  checkDomain(fam, w);
  if (shrinkingSets.empty()) throw DomainError("equiIntegrabilityMeasure: no sets");
  const Grid& g = fam.grid();
  const Eigen::ArrayXd exps = p.sample(g);
  ConditionProfile prof{"equi-integrability", {}, {}, {}, threshold, ProfileVerdict::Inconclusive};
  for (std::size_t k = 0; k < shrinkingSets.size(); ++k) {
    const auto [v, arg] = supOver(fam.size(), [&](std::size_t i) {
      return restrictedNorm(fam.members[i].magnitude() * w.values(), exps, g, shrinkingSets[k], relTol).value;
    });
    prof.parameter.push_back(static_cast<double>(k));
    prof.supValues.push_back(v);
    prof.argmax.push_back(arg);
  }
  prof.verdict = prof.supValues.back() <= threshold ? ProfileVerdict::Pass : ProfileVerdict::Fail;
  return prof;
}

std::vector<Region> thinSlabs(const Box& box, const Point& center, int levels) {
  if (levels < 1) throw DomainError("thinSlabs: levels must be >= 1");
  std::vector<Region> out;
  const double side = box.hi(0) - box.lo(0);
  for (int k = 1; k <= levels; ++k) {
    Box b = box;
    const double half = 0.5 * side * std::pow(2.0, -k);
    b.lo(0) = center(0) - half;
    b.hi(0) = center(0) + half;
    out.emplace_back(b);
  }
  return out;
}

Eigen::MatrixXd familyDistances(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                double relTol) {
  checkDomain(fam, w);
  const std::size_t n = fam.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallelFor(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double v = weightedNorm(fam.members[i] - fam.members[j], p, w, relTol).value;
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  });
  return d;
}

EpsNet epsNetFromDistances(const Eigen::MatrixXd& d, double eps) {
  if (!(eps > 0.0)) throw DomainError("epsNet: eps must be positive");
  const Eigen::Index n = d.rows();
  EpsNet net;
  if (n == 0) return net;
  Eigen::VectorXd nearest = d.col(0);
  std::vector<std::size_t> owner(static_cast<std::size_t>(n), 0);
  net.centers.push_back(0);
  for (;;) {
    Eigen::Index far = 0;
    const double radius = nearest.maxCoeff(&far);
    net.coveringRadius = radius;
    if (radius <= eps) break;
    const std::size_t c = net.centers.size();
    net.centers.push_back(static_cast<std::size_t>(far));
    for (Eigen::Index i = 0; i < n; ++i)
      if (d(i, far) < nearest(i)) {
        nearest(i) = d(i, far);
        owner[static_cast<std::size_t>(i)] = c;
      }
  }
  net.assignment = std::move(owner);
  return net;
}

EpsNet epsNetOracle(const FunctionFamily& fam, const ExponentField& p, const WeightField& w, double eps,
                    double relTol) {
  return epsNetFromDistances(familyDistances(fam, p, w, relTol), eps);
}

RkVerdict classify(const FunctionFamily& fam, const ExponentField& p, const WeightField& w, double qTilde,
                   const ClassifyConfig& config) {
  checkDomain(fam, w);
  if (!(qTilde > 0.0 && qTilde < p.pMinus())) throw DomainError("classify: need 0 < qTilde < p-");
  if (config.epsLevels < 1 || config.plateauLength < 1) throw DomainError("classify: bad eps ladder");
  const Grid& g = fam.grid();
  const Box& box = g.box();
  RkVerdict out;

  const auto gate = apConstant(w.pow(qTilde), scaleExponent(p, 1.0 / qTilde), DyadicCubeSet(box, config.cubeDepth),
                               {config.relTol, false});
  out.hypothesisConstant = gate.constant;
  if (gate.overflow)
    throw HypothesisFailure("classify: [w^qTilde]_{A_{p/qTilde}} overflows on " + gate.cubeSet);

  std::vector<double> radii = config.radii;
  if (radii.empty())
    for (int k = 0; k < 8; ++k) radii.push_back(2.0 * g.maxStep() * std::pow(1.4, k));
  const Point x0 = config.x0.value_or(box.center());
  std::vector<double> tails = config.tailRadii;
  if (tails.empty()) {
    double inscribed = kInfinity;
    for (int a = 0; a < box.dim(); ++a) inscribed = std::min({inscribed, x0(a) - box.lo(a), box.hi(a) - x0(a)});
    if (!(inscribed > 0.0)) throw DomainError("classify: x0 must lie inside the box");
    for (int k = 1; k <= 15; ++k) tails.push_back(inscribed * k / 16.0);
  }

  out.boundedness = uniformBoundProfile(fam, p, w, config.relTol);
  const double threshold = config.thresholdFactor * out.boundedness.supValues.front();
  out.equicontinuity = equicontinuityProfile(fam, p, w, qTilde, radii, threshold, config.relTol);
  out.vanishing = vanishingProfile(fam, p, w, x0, tails, threshold, config.relTol);

  const Eigen::MatrixXd d = familyDistances(fam, p, w, config.relTol);
  out.diameter = d.size() ? d.maxCoeff() : 0.0;
  for (int k = 0; k < config.epsLevels; ++k) {
    const double eps = std::ldexp(out.diameter, -k);
    out.eps.push_back(eps);
    out.netSizes.push_back(eps > 0.0 ? epsNetFromDistances(d, eps).centers.size() : 1);
  }
  const auto& ns = out.netSizes;
  const auto len = static_cast<std::size_t>(config.plateauLength);
  out.plateau = ns.size() >= len && std::all_of(ns.end() - static_cast<long>(len), ns.end(),
                                                [&](std::size_t s) { return s == ns.back(); });
  out.grows = ns.back() > ns.front();

  if (out.boundedness.verdict == ProfileVerdict::Fail) out.failingClauses.push_back("uniform-bound");
  if (out.equicontinuity.verdict == ProfileVerdict::Fail) out.failingClauses.push_back("equicontinuity");
  if (out.vanishing.verdict == ProfileVerdict::Fail) out.failingClauses.push_back("vanishing");
  const bool allPass = out.boundedness.verdict == ProfileVerdict::Pass &&
                       out.equicontinuity.verdict == ProfileVerdict::Pass &&
                       out.vanishing.verdict == ProfileVerdict::Pass;
  if (allPass && out.plateau)
    out.verdict = "consistent-compact";
  else if (!out.failingClauses.empty() && out.grows)
    out.verdict = "consistent-noncompact";
  else
    out.verdict = "inconclusive";
  return out;
}

RkCase canonicalRkCase(const std::string& name, bool doubled) {
  const int f = doubled ? 2 : 1;
  if (name == "mollifier") {
    const Grid g = Grid::line(-2.0, 2.0, 4097);
    const PointFunction bump = [](const Point& x) {
      const double t = x(0) / 0.5;
      return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
    };
    auto fam = dilateFamily(g, bump, 4 * f + 1, 0.25 / f);
    fam.label = "mollifier";
    return {std::move(fam), ExponentField::constant(g.box(), 2.0), WeightField::unit(g), 0.25};
  }
  if (name == "translate") {
    const Grid g = Grid::line(0.0, 10.0, 4097);
    const PointFunction chi = [](const Point& x) { return x(0) >= 0.0 && x(0) <= 1.0 ? 1.0 : 0.0; };
    auto fam = translateFamily(g, chi, 8 * f + 1, 1.0 / f);
    fam.label = "translate";
    return {std::move(fam), ExponentField::constant(g.box(), 2.0), WeightField::unit(g), 0.25};
  }
  if (name == "oscillation") {
    const Grid g = Grid::line(-1.0, 2.0, 2049);
    const PointFunction chi = [](const Point& x) { return x(0) >= 0.0 && x(0) <= 1.0 ? 1.0 : 0.0; };
    auto fam = modulateFamily(g, chi, 6 * f + 1, 1.0 / f);
    fam.label = "oscillation";
    return {std::move(fam), ExponentField::constant(g.box(), 2.0), WeightField::unit(g), 0.25};
  }
  throw DomainError("unknown canonical family '" + name + "'");
}

}  // namespace varleb
