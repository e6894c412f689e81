#include "varleb/maximal.hpp"

#include "varleb/errors.hpp"
#include "varleb/norms.hpp"
#include "varleb/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace varleb {

namespace {

// Largest integer k >= 0 with k * h < r.
Eigen::Index halfWidth(double r, double h) {
  auto k = static_cast<Eigen::Index>(std::floor(r / h));
  while (k > 0 && static_cast<double>(k) * h >= r) --k;
  while (static_cast<double>(k + 1) * h < r) ++k;
  return k;
}

// Prefix sums of weighted values along axis 1 (one row per axis-0 index).
struct RowPrefix {
  Eigen::Index n0, n1;
  std::vector<long double> wg, w;

  RowPrefix(const Grid& grid, const Eigen::ArrayXd& g) {
    n0 = grid.resolution(0);
    n1 = grid.dim() == 2 ? grid.resolution(1) : 1;
    if (grid.dim() == 1) std::swap(n0, n1);  // 1D: a single row
    wg.assign(static_cast<std::size_t>(n0 * (n1 + 1)), 0.0L);
    w.assign(wg.size(), 0.0L);
    const Eigen::ArrayXd& q = grid.weights();
    for (Eigen::Index i = 0; i < n0; ++i)
      for (Eigen::Index j = 0; j < n1; ++j) {
        const Eigen::Index k = i * n1 + j;
        const auto at = static_cast<std::size_t>(i * (n1 + 1) + j);
        wg[at + 1] = wg[at] + static_cast<long double>(q(k)) * g(k);
        w[at + 1] = w[at] + static_cast<long double>(q(k));
      }
  }

  void add(Eigen::Index row, Eigen::Index a, Eigen::Index b, long double& sg, long double& sw) const {
    a = std::max<Eigen::Index>(a, 0);
    b = std::min<Eigen::Index>(b, n1 - 1);
    if (a > b) return;
    const auto base = static_cast<std::size_t>(row * (n1 + 1));
    sg += wg[base + static_cast<std::size_t>(b + 1)] - wg[base + static_cast<std::size_t>(a)];
    sw += w[base + static_cast<std::size_t>(b + 1)] - w[base + static_cast<std::size_t>(a)];
  }
};

// Weighted average of g over the open ball of radius r around node k.
double ballMean(const Grid& grid, const RowPrefix& pre, Eigen::Index k, double r) {
  long double sg = 0.0L, sw = 0.0L;
  if (grid.dim() == 1) {
    const Eigen::Index c = halfWidth(r, grid.step(0));
    pre.add(0, k - c, k + c, sg, sw);
  } else {
    const auto [i0, i1] = grid.multiIndex(k);
    const double h0 = grid.step(0), h1 = grid.step(1);
    const Eigen::Index c0 = halfWidth(r, h0);
    for (Eigen::Index d = -c0; d <= c0; ++d) {
      const Eigen::Index row = i0 + d;
      if (row < 0 || row >= grid.resolution(0)) continue;
      const double rest = r * r - (static_cast<double>(d) * h0) * (static_cast<double>(d) * h0);
      if (!(rest > 0.0)) continue;
      const Eigen::Index c1 = halfWidth(std::sqrt(rest), h1);
      pre.add(row, i1 - c1, i1 + c1, sg, sw);
    }
  }
  return sw > 0.0L ? static_cast<double>(sg / sw) : 0.0;
}

}  // namespace

RadiusSweep RadiusSweep::geometric(double rMin, double rMax, int count) {
  if (!(rMin > 0.0) || !(rMax >= rMin) || count < 1) throw DomainError("radius sweep: need 0 < rMin <= rMax, count >= 1");
  RadiusSweep s;
  for (int k = 0; k < count; ++k)
    s.radii.push_back(count == 1 ? rMin : rMin * std::pow(rMax / rMin, static_cast<double>(k) / (count - 1)));
  return s;
}

RadiusSweep RadiusSweep::ladder(double anchor, double ratio, int count) {
  if (!(anchor > 0.0) || !(ratio > 1.0) || count < 1) throw DomainError("radius sweep: need anchor > 0, ratio > 1");
  RadiusSweep s;
  for (int k = 0; k < count; ++k) s.radii.push_back(anchor * std::pow(ratio, k));
  return s;
}

RadiusSweep RadiusSweep::defaultFor(const Grid& grid, int count) {
  return geometric(grid.maxStep(), grid.box().diameter(), count);
}

GridFunction maximalFunction(const GridFunction& f, double qTilde, const RadiusSweep& sweep) {
  if (!(qTilde > 0.0)) throw DomainError("maximalFunction: qTilde must be positive");
  if (sweep.radii.empty()) throw DomainError("maximalFunction: empty radius sweep");
  const Grid& g = f.grid();
  const Eigen::ArrayXd mag = f.magnitude();
  const double top = mag.maxCoeff();
  if (!(top > 0.0)) return GridFunction::zero(g);
  // Normalise by the maximum so |f|^qTilde stays in range for small qTilde.
  const RowPrefix pre(g, (mag / top).pow(qTilde));
  Eigen::ArrayXd out(g.size());
  parallelFor(static_cast<std::size_t>(g.size()), [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    double best = 0.0;
    for (double r : sweep.radii) best = std::max(best, ballMean(g, pre, k, r));
    out(k) = top * std::pow(best, 1.0 / qTilde);
  });
  return GridFunction(g, std::move(out));
}

GridFunction ballMeans(const GridFunction& f, double radius) {
  if (!(radius > 0.0)) throw DomainError("ballMeans: radius must be positive");
  const Grid& g = f.grid();
  const RowPrefix pre(g, f.values());
  Eigen::ArrayXd out(g.size());
  parallelFor(static_cast<std::size_t>(g.size()), [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    out(k) = ballMean(g, pre, k, radius);
  });
  return GridFunction(g, std::move(out));
}

GridFunction oscillationAverage(const GridFunction& f, double radius, double qTilde) {
  if (!(radius > 0.0)) throw DomainError("oscillationAverage: radius must be positive");
  if (!(qTilde > 0.0)) throw DomainError("oscillationAverage: qTilde must be positive");
  const Grid& g = f.grid();
  const Eigen::ArrayXd& v = f.values();
  const Eigen::ArrayXd& q = g.weights();
  const int n = g.dim();
  const double h0 = g.step(0), h1 = n == 2 ? g.step(1) : 1.0;
  const Eigen::Index c0 = halfWidth(radius, h0);
  Eigen::ArrayXd out(g.size());
  parallelFor(static_cast<std::size_t>(g.size()), [&](std::size_t idx) {
    const auto k = static_cast<Eigen::Index>(idx);
    const auto [i0, i1] = g.multiIndex(k);
    long double sg = 0.0L, sw = 0.0L;
    for (Eigen::Index d = -c0; d <= c0; ++d) {
      const Eigen::Index row = i0 + d;
      if (row < 0 || row >= g.resolution(0)) continue;
      Eigen::Index lo = row, hi = row;
      if (n == 2) {
        const double rest = radius * radius - (static_cast<double>(d) * h0) * (static_cast<double>(d) * h0);
        if (!(rest > 0.0)) continue;
        const Eigen::Index c1 = halfWidth(std::sqrt(rest), h1);
        lo = g.flatIndex(row, std::max<Eigen::Index>(0, i1 - c1));
        hi = g.flatIndex(row, std::min<Eigen::Index>(g.resolution(1) - 1, i1 + c1));
      }
      for (Eigen::Index j = lo; j <= hi; ++j) {
        sg += static_cast<long double>(q(j)) * std::pow(std::abs(v(k) - v(j)), qTilde);
        sw += q(j);
      }
    }
    if (!(sw > 0.0L)) throw EmptyRegion("oscillationAverage: ball captures no grid node");
    out(k) = std::pow(static_cast<double>(sg / sw), 1.0 / qTilde);
  });
  return GridFunction(g, std::move(out));
}

MaximalProbeReport maximalBoundednessProbe(const ExponentField& p, const WeightField& w, double qTilde,
                                           const std::vector<GridFunction>& corpus, const RadiusSweep& sweep,
                                           const DyadicCubeSet& cubes, double relTol) {
  if (!(qTilde > 0.0 && qTilde < p.pMinus())) throw DomainError("maximalBoundednessProbe: need 0 < qTilde < p-");
  MaximalProbeReport rep;
  rep.hypothesis = apConstant(w.pow(qTilde), scaleExponent(p, 1.0 / qTilde), cubes, {relTol, false});
  rep.hypothesisConstant = rep.hypothesis.constant;
  if (rep.hypothesis.overflow)
    throw HypothesisFailure("maximalBoundednessProbe: [w^qTilde]_{A_{p/qTilde}} overflows on " + rep.hypothesis.cubeSet);
  for (const auto& f : corpus) {
    const double base = weightedNorm(f, p, w, relTol).value;
    if (!(base > 0.0)) {
      rep.ratios.push_back(std::nan(""));
      continue;
    }
    const double r = weightedNorm(maximalFunction(f, qTilde, sweep), p, w, relTol).value / base;
    rep.ratios.push_back(r);
    rep.maxRatio = std::max(rep.maxRatio, r);
  }
  return rep;
}

}  // namespace varleb
