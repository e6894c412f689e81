#include <doctest.h>

#include "support.hpp"
#include "varleb/errors.hpp"
#include "varleb/norms.hpp"

#include <cmath>
#include <numbers>

using namespace varleb;
using namespace varleb::testing;

namespace {
const Box unit = Box::interval(0.0, 1.0);

GridFunction indicator(const Grid& g, double a, double b) {
  return GridFunction::sample(g, [&](const Point& x) { return x(0) >= a && x(0) <= b ? 1.0 : 0.0; });
}

// Root of int_0^2 lambda^-(1+x) dx = (1/lambda - 1/lambda^3) / log(lambda) = 1, by plain bisection.
double variableExponentOracle() {
  auto g = [](double l) { return (1.0 / l - 1.0 / (l * l * l)) / std::log(l) - 1.0; };
  double lo = 1.0001, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("modular") {
  const Grid g = Grid::line(0.0, 1.0, 1024);
  const auto chi = indicator(g, 0.0, 0.5);
  CHECK(modular(chi, ExponentField::constant(unit, 3.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(modular(chi, ExponentField::affine(unit, 1.0, point(2.0))) == doctest::Approx(0.5).epsilon(1e-12));

  const auto pw = ExponentField::piecewise(unit, {0.5}, {2.0, 3.0});
  CHECK(modular(GridFunction::constant(g, 2.0), pw) == doctest::Approx(6.0).epsilon(1e-12));

  const Grid g4 = Grid::line(0.0, 1.0, 4096);
  const auto x = GridFunction::sample(g4, [](const Point& p) { return p(0); });
  CHECK(std::abs(modular(x, ExponentField::constant(unit, 2.0)) - 1.0 / 3.0) < 1e-6);
  CHECK(modular(GridFunction::zero(g4), ExponentField::constant(unit, 2.0)) == 0.0);
}

TEST_CASE("luxemburgNorm") {
  const Grid g = Grid::line(0.0, 1.0, 1025);
  const auto three = GridFunction::constant(g, 3.0);
  CHECK(luxemburgNorm(three, ExponentField::constant(unit, 2.0)).value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(luxemburgNorm(GridFunction::zero(g), ExponentField::affine(unit, 1, point(1))).value == 0.0);

  // The modular of chi_[0,1] at lambda = 1 is 1 whatever p is.
  const auto chi = GridFunction::constant(g, 1.0);
  CHECK(luxemburgNorm(chi, ExponentField::affine(unit, 1.0, point(1.0))).value == doctest::Approx(1.0).epsilon(1e-9));

  const Box two = Box::interval(0.0, 2.0);
  const auto r = luxemburgNorm(GridFunction::constant(Grid(two, {8193}), 1.0), ExponentField::affine(two, 1.0, point(1.0)));
  CHECK(std::abs(r.value - variableExponentOracle()) < 1e-6);
  CHECK(r.bracketHi - r.bracketLo <= 1e-10 * r.value);
  CHECK(r.modularAtValue <= 1.0);
  CHECK(r.modularAtValue >= 1.0 - 1e-8);
  CHECK(r.iterations > 0);

  CHECK_THROWS_AS(luxemburgNorm(chi, ExponentField::constant(unit, 2.0), 0.5), DomainError);
}

TEST_CASE("luxemburgNorm handles extreme scales") {
  const Grid g = Grid::line(0.0, 1.0, 257);
  const auto p = ExponentField::affine(unit, 1.5, point(1.0));
  for (double s : {1e-200, 1e-40, 1e40, 1e200}) {
    const auto f = GridFunction::constant(g, s);
    const auto one = luxemburgNorm(GridFunction::constant(g, 1.0), p).value;
    CHECK(luxemburgNorm(f, p).value == doctest::Approx(s * one).epsilon(1e-9));
  }
}

TEST_CASE("homogeneity under powers") {
  const Grid g = Grid::line(-4.0, 4.0, 2049);
  const Box box = g.box();
  const auto gauss = GridFunction::sample(g, [](const Point& x) { return std::exp(-x(0) * x(0)); });
  const auto p = ExponentField::constant(box, 2.5);
  const double lhs = luxemburgNorm(absPow(gauss, 0.5), p).value;
  const double rhs = std::pow(luxemburgNorm(gauss, scaleExponent(p, 0.5)).value, 0.5);
  CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto f = randomFunction(g, rng);
    const auto q = randomExponent(box, rng, 0.5, 5.0);
    const double s = uniform(rng, 0.2, 3.0);
    const double a = luxemburgNorm(absPow(f, s), q).value;
    const double b = std::pow(luxemburgNorm(f, scaleExponent(q, s)).value, s);
    CHECK(std::abs(a - b) <= 1e-7 * b);
  }
}

TEST_CASE("modular and norm sandwich, monotonicity") {
  const Grid g = Grid::line(-1.0, 2.0, 513);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const auto f = randomFunction(g, rng);
    const auto p = randomExponent(g.box(), rng, 0.3, 6.0);
    const double rho = modular(f, p), n = luxemburgNorm(f, p).value;
    const double a = std::pow(rho, 1.0 / p.pMinus()), b = std::pow(rho, 1.0 / p.pPlus());
    CHECK(n >= std::min(a, b) * (1 - 1e-9));
    CHECK(n <= std::max(a, b) * (1 + 1e-9));

    const GridFunction bigger(g, f.magnitude() + randomFunction(g, rng).magnitude());
    CHECK(n <= luxemburgNorm(bigger, p).value + 1e-12);
  }
}

TEST_CASE("weightedNorm") {
  const Grid g = Grid::line(0.0, 1.0, 4097);
  const auto p = ExponentField::affine(unit, 1.2, point(1.5));
  const auto f = GridFunction::sample(g, [](const Point& x) { return std::sin(7 * x(0)) + 0.3; });
  CHECK(weightedNorm(f, p, WeightField::unit(g)).value == luxemburgNorm(f, p).value);

  // w(x) = x, nudged off zero at the left node.
  const auto w = WeightField::sample(g, [](const Point& x) { return std::max(x(0), 1e-300); });
  const auto one = GridFunction::constant(g, 1.0);
  CHECK(std::abs(weightedNorm(one, ExponentField::constant(unit, 2.0), w).value - 1.0 / std::sqrt(3.0)) < 1e-6);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto h = randomFunction(g, rng);
    const auto q = randomExponent(unit, rng, 0.5, 4.0);
    const double a = weightedNorm(7.0 * h, q, w).value, b = 7.0 * weightedNorm(h, q, w).value;
    CHECK(std::abs(a - b) <= 1e-10 * b);
  }
}

TEST_CASE("mixedNorm") {
  const Box sq = Box::rectangle(0, 1, 0, 1);
  {
    const Grid g(sq, {257, 129});
    const auto f = GridFunction::sample(g, [](const Point& x) { return (1 + x(0)) * std::cos(x(1)); });
    const auto p = ExponentField::affine(unit, 1.5, point(1.0));
    const Grid xg = Grid::line(0, 1, 257), yg = Grid::line(0, 1, 129);
    const auto a = GridFunction::sample(xg, [](const Point& x) { return 1 + x(0); });
    const auto b = GridFunction::sample(yg, [](const Point& y) { return std::cos(y(0)); });
    const double expected = luxemburgNorm(b, ExponentField::constant(unit, 3.0)).value * luxemburgNorm(a, p).value;
    CHECK(mixedNorm(f, p, 3.0).value == doctest::Approx(expected).epsilon(1e-8));
  }
  {
    const Grid g = Grid::square(sq, 65);
    CHECK(mixedNorm(GridFunction::constant(g, 1.0), ExponentField::constant(unit, 2.0), 2.0).value ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    const Grid g(sq, {257, 16385});
    const auto f = GridFunction::sample(g, [](const Point& x) { return x(0) < x(1) ? 1.0 : 0.0; });
    CHECK(std::abs(mixedNorm(f, ExponentField::constant(unit, 2.0), 1.0).value - 1.0 / std::sqrt(3.0)) < 1e-4);
  }
}

TEST_CASE("duality pairing lower bound") {
  const Grid g = Grid::line(-5.0, 5.0, 2049);
  const Box box = g.box();
  const auto gauss = GridFunction::sample(g, [](const Point& x) { return std::exp(-x(0) * x(0)); });
  const auto two = ExponentField::constant(box, 2.0);
  CHECK(std::abs(dualityPairingLowerBound(gauss, two, 50, 1) - luxemburgNorm(gauss, two).value) < 1e-8);
  CHECK(dualityPairingLowerBound(GridFunction::zero(g), two, 10, 1) == 0.0);

  const Grid ug = Grid::line(0.0, 1.0, 513);
  const auto p = ExponentField::affine(unit, 2.0, point(1.0));
  const auto bump = GridFunction::sample(ug, [](const Point& x) {
    const double t = (x(0) - 0.5) / 0.3;
    return std::abs(t) < 1 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
  });
  const double bound = dualityPairingLowerBound(bump, p, 1000, 17);
  const double norm = luxemburgNorm(bump, p).value, c = holderConstant(p);
  CHECK(bound / c <= norm);
  CHECK(norm <= c * bound);
  CHECK_THROWS_AS(dualityPairingLowerBound(bump, ExponentField::constant(unit, 1.0), 1, 1), DomainError);
}

TEST_CASE("Holder constants") {
  const auto p = ExponentField::affine(unit, 2.0, point(1.0));
  CHECK(holderConstant(p) == doctest::Approx(1.0 / 2 - 1.0 / 3 + 1));
  CHECK(pairHolderConstant(ExponentField::constant(unit, 4), ExponentField::constant(unit, 4)) == 1.0);
  CHECK(pairHolderConstant(p, dualExponent(p)) == doctest::Approx(holderConstant(p)).epsilon(1e-9));
  CHECK(quasiTriangleConstant(ExponentField::constant(unit, 0.5)) == doctest::Approx(4.0));
  const std::vector<ExponentField> three{p, p, ExponentField::constant(unit, 3)};
  CHECK(productHolderConstant(three) >= 1.0);
}

TEST_CASE("Holder inequality on random pairs") {
  const Grid g = Grid::line(-1.0, 1.0, 513);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const auto p = randomExponent(g.box(), rng, 1.1, 5.0);
    const auto f = randomFunction(g, rng), h = randomFunction(g, rng);
    const double lhs = integrate(abs(f * h));
    const double rhs = luxemburgNorm(f, p).value * luxemburgNorm(h, dualExponent(p)).value;
    CHECK(lhs <= holderConstant(p) * rhs * (1 + 1e-10));
  }
}
