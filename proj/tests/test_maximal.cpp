#include <doctest.h>

#include "support.hpp"
#include "varleb/errors.hpp"
#include "varleb/maximal.hpp"
#include "varleb/norms.hpp"

#include <cmath>

using namespace varleb;
using namespace varleb::testing;

namespace {
GridFunction indicator(const Grid& g, double a, double b) {
  return GridFunction::sample(g, [a, b](const Point& x) { return x(0) >= a && x(0) <= b ? 1.0 : 0.0; });
}
}  // namespace

TEST_CASE("maximal function of an interval indicator") {
  // M chi_[0,1](x) = 1/(2x) for x >= 1, attained at r = x.
  const Grid g = Grid::line(-1.0, 9.0, 16001);
  const auto sweep = RadiusSweep::ladder(0.125, std::pow(2.0, 1.0 / 12.0), 64);
  const auto m = maximalFunction(indicator(g, 0.0, 1.0), 1.0, sweep);
  for (double x : {1.5, 2.0, 4.0}) CHECK(m.values()(g.nearestNode(point(x))) == doctest::Approx(0.5 / x).epsilon(1e-3));
  // Inside the support the maximal function is 1.
  CHECK(m.values()(g.nearestNode(point(0.5))) == doctest::Approx(1.0));
}

TEST_CASE("maximal function of constants and pointwise domination") {
  const Grid g = Grid::line(0.0, 1.0, 513);
  const auto sweep = RadiusSweep::defaultFor(g);
  for (double q : {0.25, 1.0, 2.0}) {
    const auto m = maximalFunction(GridFunction::constant(g, -3.5), q, sweep);
    CHECK((m.values() - 3.5).abs().maxCoeff() <= 1e-12);
  }
  std::mt19937_64 rng(11);
  for (int t = 0; t < 8; ++t) {
    const auto f = randomFunction(g, rng);
    const auto m = maximalFunction(f, uniform(rng, 0.3, 2.0), sweep);
    CHECK((m.values() - f.magnitude()).minCoeff() >= -1e-12 * f.supNorm());
  }
}

TEST_CASE("maximal function matches direct ball averages") {
  const Grid g = Grid::square(Box::rectangle(0.0, 1.0, 0.0, 1.0), 33);
  std::mt19937_64 rng(5);
  const auto f = randomFunction(g, rng);
  const RadiusSweep sweep{{0.07, 0.2, 0.45}};
  const auto m = maximalFunction(f, 1.5, sweep);
  for (Eigen::Index k : {0, 100, 544, 1088}) {
    double best = 0.0;
    for (double r : sweep.radii) best = std::max(best, ballAverage(f, g.node(k), r, 1.5));
    CHECK(m.values()(k) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("maximal function is sublinear, homogeneous and monotone in the sweep") {
  const Grid g = Grid::line(-1.0, 1.0, 401);
  std::mt19937_64 rng(7);
  const auto sweep = RadiusSweep::defaultFor(g, 32);
  const RadiusSweep coarse{{sweep.radii[0], sweep.radii[10], sweep.radii[20]}};
  for (int t = 0; t < 8; ++t) {
    const auto f = randomFunction(g, rng), h = randomFunction(g, rng);
    const auto mf = maximalFunction(f, 1.0, sweep), mh = maximalFunction(h, 1.0, sweep);
    const auto sum = maximalFunction(f + h, 1.0, sweep);
    CHECK((sum.values() - mf.values() - mh.values()).maxCoeff() <= 1e-9 * (mf.supNorm() + mh.supNorm()));
    const double c = uniform(rng, -50.0, 50.0);
    const double q = uniform(rng, 0.3, 3.0);
    const auto mc = maximalFunction(c * f, q, sweep), mq = maximalFunction(f, q, sweep);
    CHECK((mc.values() - std::abs(c) * mq.values()).abs().maxCoeff() <= 1e-12 * std::abs(c) * mq.supNorm());
    CHECK((maximalFunction(f, q, coarse).values() - mq.values()).maxCoeff() <= 0.0);
  }
}

TEST_CASE("maximal function is nondecreasing in qTilde") {
  const Grid g = Grid::line(0.0, 2.0, 257);
  std::mt19937_64 rng(3);
  const auto sweep = RadiusSweep::defaultFor(g, 24);
  for (int t = 0; t < 5; ++t) {
    const auto f = randomFunction(g, rng);
    const auto lo = maximalFunction(f, 0.5, sweep), hi = maximalFunction(f, 1.5, sweep);
    CHECK((lo.values() - hi.values()).maxCoeff() <= 1e-12 * hi.supNorm());
  }
}

TEST_CASE("oscillation average") {
  const Grid g = Grid::line(0.0, 1.0, 2001);
  const auto x = GridFunction::sample(g, [](const Point& p) { return p(0); });
  const double r = 0.05;
  const auto o = oscillationAverage(x, r, 1.0);
  // Away from the boundary the average of |x - y| over (x-r, x+r) is r/2.
  CHECK(o.values()(1000) == doctest::Approx(r / 2).epsilon(2e-3));
  CHECK(o.values()(400) == doctest::Approx(r / 2).epsilon(2e-3));
  CHECK(oscillationAverage(GridFunction::constant(g, 4.0), r, 0.5).supNorm() == 0.0);

  // Lipschitz bound: osc <= L r.
  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    const double a = uniform(rng, 1.0, 20.0);
    const auto f = GridFunction::sample(g, [a](const Point& p) { return std::sin(a * p(0)); });
    const double rr = uniform(rng, 0.002, 0.1), q = uniform(rng, 0.25, 2.0);
    CHECK(oscillationAverage(f, rr, q).supNorm() <= a * rr * (1 + 1e-12));
  }
  CHECK_THROWS_AS(oscillationAverage(x, 0.0, 1.0), DomainError);
}

TEST_CASE("boundedness probe") {
  const Box box = Box::interval(-1.0, 1.0);
  const Grid g = Grid::line(-1.0, 1.0, 1024);
  const DyadicCubeSet cubes(box, 5);
  const auto p = ExponentField::affine(box, 2.5, point(0.5));
  const auto sweep = RadiusSweep::defaultFor(g, 48);
  std::mt19937_64 rng(21);
  std::vector<GridFunction> corpus;
  for (int t = 0; t < 6; ++t) corpus.push_back(randomFunction(g, rng));
  corpus.push_back(GridFunction::zero(g));

  const auto unit = maximalBoundednessProbe(p, WeightField::unit(g), 1.0, corpus, sweep, cubes);
  CHECK(unit.ratios.size() == corpus.size());
  CHECK(std::isnan(unit.ratios.back()));
  CHECK(unit.maxRatio >= 1.0);
  CHECK(std::isfinite(unit.maxRatio));
  // For variable p the unit weight has constant slightly above 1.
  CHECK(unit.hypothesisConstant >= 1.0 - 1e-9);
  CHECK(unit.hypothesisConstant <= 1.05);

  const auto w = WeightField::sample(g, [](const Point& x) { return std::pow(std::abs(x(0)), 0.2); });
  const auto weighted = maximalBoundednessProbe(p, w, 1.0, corpus, sweep, cubes);
  CHECK(std::isfinite(weighted.maxRatio));
  CHECK(weighted.hypothesisConstant > 1.0);

  // |x|^-60 on a node-free origin is far outside the class; the constant overflows.
  const auto bad = WeightField::sample(g, [](const Point& x) { return std::pow(std::abs(x(0)), -60.0); });
  CHECK_THROWS_AS(maximalBoundednessProbe(p, bad, 1.0, corpus, sweep, cubes), HypothesisFailure);
  CHECK_THROWS_AS(maximalBoundednessProbe(p, w, 2.0, corpus, sweep, cubes), DomainError);
}

TEST_CASE("boundedness ratios are stable under grid refinement") {
  const Box box = Box::interval(0.0, 1.0);
  const auto p = ExponentField::constant(box, 2.0);
  const DyadicCubeSet cubes(box, 3);
  auto ratios = [&](int n) {
    const Grid g = Grid::line(0.0, 1.0, n);
    std::vector<GridFunction> corpus;
    for (int k = 1; k <= 10; ++k) {
      const double c = 0.05 + 0.09 * k, s = 0.02 + 0.01 * k;
      corpus.push_back(GridFunction::sample(g, [c, s](const Point& x) {
        return std::exp(-(x(0) - c) * (x(0) - c) / (2 * s * s));
      }));
    }
    return maximalBoundednessProbe(p, WeightField::unit(g), 1.0, corpus, RadiusSweep::defaultFor(g, 64), cubes).ratios;
  };
  const auto a = ratios(513), b = ratios(1025);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(0.05));
}
