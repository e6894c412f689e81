#include "varleb/norms.hpp"

#include "varleb/errors.hpp"
#include "varleb/simple_function.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace varleb {

namespace {

// Nonzero terms in log form: rho(lambda) = sum exp(logQuad + exps * (logMag - log lambda)).
struct LogTerms {
  Eigen::ArrayXd logMag, exps, logQuad;

  LogTerms(const Eigen::ArrayXd& mag, const Eigen::ArrayXd& e, const Eigen::ArrayXd& quad) {
    Eigen::Index n = 0;
    for (Eigen::Index k = 0; k < mag.size(); ++k) n += mag(k) > 0.0 && quad(k) > 0.0;
    logMag.resize(n);
    exps.resize(n);
    logQuad.resize(n);
    n = 0;
    for (Eigen::Index k = 0; k < mag.size(); ++k) {
      if (!(mag(k) > 0.0 && quad(k) > 0.0)) continue;
      logMag(n) = std::log(mag(k));
      exps(n) = e(k);
      logQuad(n) = std::log(quad(k));
      ++n;
    }
  }

  double at(double logLambda) const { return (logQuad + exps * (logMag - logLambda)).exp().sum(); }
};

}  // namespace

double modularOf(const Eigen::ArrayXd& mag, const Eigen::ArrayXd& exps, const Eigen::ArrayXd& quad) {
  if (mag.size() != exps.size() || mag.size() != quad.size()) throw DomainError("modular: size mismatch");
  return LogTerms(mag, exps, quad).at(0.0);
}

NormResult luxemburgOf(const Eigen::ArrayXd& mag, const Eigen::ArrayXd& exps, const Eigen::ArrayXd& quad,
                       double relTol) {
  if (!(relTol > 0.0 && relTol <= 1e-2)) throw DomainError("luxemburgNorm: relTol must lie in (0, 1e-2]");
  if (mag.size() != exps.size() || mag.size() != quad.size()) throw DomainError("luxemburgNorm: size mismatch");
  NormResult r;
  const LogTerms t(mag, exps, quad);
  if (t.logMag.size() == 0) return r;

  const double top = t.logMag.maxCoeff();
  if (t.exps.maxCoeff() == t.exps.minCoeff()) {
    // ||f||_p = M * (sum w (|f|/M)^p)^(1/p), scaled by M = max|f| to stay in range.
    const double p = t.exps(0);
    const double inner = (t.logQuad + p * (t.logMag - top)).exp().sum();
    r.value = std::exp(top + std::log(inner) / p);
    r.bracketLo = r.bracketHi = r.value;
    r.modularAtValue = t.at(std::log(r.value));
    return r;
  }

  const double logMeasure = std::log(quad.sum());
  double lo = std::max(std::log(1e-300), top + logMeasure), hi = lo;
  const double step = std::log(2.0);
  int steps = 0;
  if (t.at(lo) > 1.0) {
    while (t.at(hi) > 1.0) {
      lo = hi;
      hi += step;
      if (++steps > 200) throw ConvergenceError("luxemburgNorm: no bracket after 200 doublings");
    }
  } else {
    while (t.at(lo) <= 1.0) {
      hi = lo;
      lo -= step;
      if (++steps > 200) throw ConvergenceError("luxemburgNorm: no bracket after 200 halvings");
    }
  }
  // rho(lo) > 1 >= rho(hi); bisect in log(lambda).
  const double logTol = std::log1p(relTol);
  while (hi - lo > logTol) {
    const double mid = 0.5 * (lo + hi);
    (t.at(mid) > 1.0 ? lo : hi) = mid;
    ++r.iterations;
    if (r.iterations > 2000) throw ConvergenceError("luxemburgNorm: bisection did not terminate");
  }
  r.value = std::exp(hi);
  r.bracketLo = std::exp(lo);
  r.bracketHi = r.value;
  r.modularAtValue = t.at(hi);
  return r;
}

NormResult restrictedNorm(const Eigen::ArrayXd& mag, const Eigen::ArrayXd& exps, const Grid& grid,
                          const Region& region, double relTol, bool complement) {
  const RegionMask m = grid.mask(region, complement);
  if (m.empty()) return {};
  return luxemburgOf(m.gather(mag), m.gather(exps), m.weights, relTol);
}

NormResult mixedNormRows(const Eigen::ArrayXXd& rows, const Eigen::ArrayXd& yWeights, const Grid& xGrid,
                         const ExponentField& p, double qTilde, const WeightField* outerWeight, double relTol) {
  if (!(qTilde > 0.0)) throw DomainError("mixedNorm: inner exponent must be positive");
  if (rows.rows() != xGrid.size() || rows.cols() != yWeights.size()) throw DomainError("mixedNorm: shape mismatch");
  Eigen::ArrayXd inner(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const Eigen::ArrayXd row = rows.row(i).transpose().abs();
    const double top = row.maxCoeff();
    inner(i) = top > 0.0 ? top * std::pow((yWeights * (row / top).pow(qTilde)).sum(), 1.0 / qTilde) : 0.0;
  }
  if (outerWeight) {
    detail::requireSameGrid(xGrid, outerWeight->grid(), "mixedNorm");
    inner *= outerWeight->values();
  }
  return luxemburgOf(inner, p.sample(xGrid), xGrid.weights(), relTol);
}

NormResult mixedNorm(const GridFunction& f, const ExponentField& p, double qTilde, const WeightField* outerWeight,
                     double relTol) {
  const Grid& g = f.grid();
  if (g.dim() != 2) throw DomainError("mixedNorm: needs a grid over x and y");
  const Grid xGrid = Grid::line(g.box().lo(0), g.box().hi(0), g.resolution(0));
  if (!p.domain().sameAs(xGrid.box())) throw DomainError("mixedNorm: exponent domain is not the x-range");
  const Grid yGrid = Grid::line(g.box().lo(1), g.box().hi(1), g.resolution(1));
  const Eigen::Index nx = g.resolution(0), ny = g.resolution(1);
  // Row-major node order makes the value array an (ny x nx) column-major block.
  const Eigen::ArrayXXd rows = Eigen::Map<const Eigen::ArrayXXd>(f.values().data(), ny, nx).transpose();
  return mixedNormRows(rows, yGrid.weights(), xGrid, p, qTilde, outerWeight, relTol);
}

double dualityPairingLowerBound(const GridFunction& f, const ExponentField& p, int trials, std::uint64_t seed) {
  if (!(p.pMinus() > 1.0)) throw DomainError("dualityPairingLowerBound: requires p- > 1");
  const Grid& g = f.grid();
  const Eigen::ArrayXd mag = f.magnitude();
  if (!(mag.maxCoeff() > 0.0)) return 0.0;
  const Eigen::ArrayXd ps = p.sample(g);
  const Eigen::ArrayXd dual = dualExponent(p).sample(g);
  const Eigen::ArrayXd& quad = g.weights();

  auto pairing = [&](const Eigen::ArrayXd& gv) {
    const double n = luxemburgOf(gv, dual, quad).value;
    return n > 0.0 ? (quad * mag * gv).sum() / n : 0.0;
  };

  const double lambda = luxemburgOf(mag, ps, quad).value;
  double best = pairing((mag / lambda).pow(ps - 1.0));

  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) best = std::max(best, pairing(randomSimpleFunction(g.box(), rng).on(g).magnitude()));
  return best;
}

double holderConstant(const ExponentField& p) { return 1.0 / p.pMinus() - 1.0 / p.pPlus() + 1.0; }

double pairHolderConstant(const ExponentField& p1, const ExponentField& p2) {
  const std::vector<ExponentField> both{p1, p2};
  const ExponentField p = harmonicCombine(both);
  if (p1.isConstant() && p2.isConstant()) return 1.0;
  const Grid g = Grid::square(p1.domain(), std::max(p1.resolution(), p2.resolution()));
  const Eigen::ArrayXd inv1 = p1.sample(g).inverse(), inv2 = p2.sample(g).inverse();
  const Eigen::ArrayXd sum = inv1 + inv2;
  const double s = (inv1 / sum).maxCoeff() + (inv2 / sum).maxCoeff();
  return std::pow(s, 1.0 / p.pMinus());
}

double productHolderConstant(std::span<const ExponentField> factors) {
  if (factors.size() < 2) return 1.0;
  const ExponentField rest = harmonicCombine(factors.subspan(1));
  return pairHolderConstant(factors.front(), rest) * productHolderConstant(factors.subspan(1));
}

double quasiTriangleConstant(const ExponentField& p) {
  return std::max(std::pow(2.0, 1.0 / p.pMinus()), std::pow(2.0, p.pPlus() / p.pMinus()));
}

}  // namespace varleb
