#include <doctest.h>

#include "varleb/cubes.hpp"
#include "varleb/field.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace varleb;

TEST_CASE("integrate: constants, monomials and a gaussian") {
  const Grid g = Grid::line(0.0, 1.0, 257);
  CHECK(integrate(GridFunction::constant(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));

  const Grid g4096 = Grid::line(0.0, 1.0, 4096);
  const auto x = GridFunction::sample(g4096, [](const Point& p) { return p(0); });
  CHECK(std::abs(integrate(x) - 0.5) < 1e-6);

  const Grid wide = Grid::line(-8.0, 8.0, 1 << 14);
  const auto gauss = GridFunction::sample(wide, [](const Point& p) { return std::exp(-p(0) * p(0)); });
  CHECK(std::abs(integrate(gauss) - std::sqrt(std::numbers::pi)) < 1e-6);
}

TEST_CASE("integrate over a region") {
  const Grid g = Grid::line(0.0, 1.0, 1024);
  const auto one = GridFunction::constant(g, 1.0);
  CHECK(integrate(one, Box::interval(0.0, 0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(integrate(one, Box::interval(0.25, 2.0)) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(integrate(one, Box::interval(3.0, 4.0)), EmptyRegion);
  CHECK_THROWS_AS(integrate(one, Ball{point(5.0), 0.1}), EmptyRegion);

  const Grid sq = Grid::square(Box::rectangle(0, 1, 0, 2), 65);
  CHECK(integrate(GridFunction::constant(sq, 1.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate(GridFunction::constant(sq, 1.0), Box::rectangle(0, 0.5, 0, 0.5)) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("integrate is linear and monotone") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Grid g = Grid::line(-1.0, 2.0, 301);
  for (int t = 0; t < 20; ++t) {
    Eigen::ArrayXd a(g.size()), b(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) a(k) = u(rng), b(k) = u(rng);
    const GridFunction f(g, a), h(g, b);
    const double ca = u(rng), cb = u(rng);
    const double lhs = integrate(ca * f + cb * h);
    CHECK(std::abs(lhs - (ca * integrate(f) + cb * integrate(h))) < 1e-12);
    const GridFunction larger(g, a.abs() + b.abs());
    CHECK(integrate(abs(f)) <= integrate(larger));
  }
}

TEST_CASE("integrate: refinement deltas shrink") {
  double prev = 0.0, prevDelta = 0.0;
  for (int r : {129, 257, 513, 1025}) {
    const Grid g = Grid::line(-8.0, 8.0, r);
    const double v = integrate(GridFunction::sample(g, [](const Point& p) { return std::exp(-p(0) * p(0)); }));
    if (r > 129) {
      const double delta = std::abs(v - prev);
      if (r > 257) CHECK(delta < 4.0 * prevDelta + 1e-15);
      prevDelta = delta;
    }
    prev = v;
  }
}

TEST_CASE("ballAverage") {
  const Grid g = Grid::line(-1.0, 3.0, 4001);
  CHECK(ballAverage(GridFunction::constant(g, 2.5), point(0.3), 0.7, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
  const auto chi = GridFunction::sample(g, [](const Point& p) { return p(0) >= 0.0 && p(0) <= 1.0 ? 1.0 : 0.0; });
  CHECK(ballAverage(chi, point(0.5), 0.25, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ballAverage(chi, point(1.0), 0.5, 1.0) - 0.5) < 2e-3);

  const auto affine = GridFunction::sample(g, [](const Point& p) { return 2.0 * p(0) + 1.0; });
  CHECK(std::abs(ballAverage(affine, point(1.0), 0.3, 1.0) - 3.0) < 2.0 * g.step(0));

  CHECK_THROWS_AS(ballAverage(chi, point(10.0), 0.1, 1.0), EmptyRegion);
  CHECK_THROWS_AS(ballAverage(chi, point(0.0), -1.0, 1.0), DomainError);
}

TEST_CASE("dyadic cubes") {
  const auto cubes = DyadicCubeSet(Box::interval(0, 1), 1, false).enumerate();
  REQUIRE(cubes.size() == 3);
  CHECK(cubes[0].box.sameAs(Box::interval(0, 1)));
  CHECK(cubes[1].box.sameAs(Box::interval(0, 0.5)));
  CHECK(cubes[2].box.sameAs(Box::interval(0.5, 1)));

  CHECK(DyadicCubeSet(Box::rectangle(0, 1, 0, 1), 1, false).count() == 5);
  CHECK(DyadicCubeSet(Box::interval(0, 1), 3, false).count() == 15);
  CHECK(DyadicCubeSet(Box::interval(0, 1), 3, false).enumerate().size() == 15);

  const DyadicCubeSet shifted(Box::rectangle(-1, 1, -1, 1), 3, true);
  const auto all = shifted.enumerate();
  CHECK(all.size() == shifted.count());
  for (const auto& c : all) CHECK(shifted.root().containsBox(c.box));
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].id.depth <= all[i].id.depth);
}

TEST_CASE("weights and grid functions reject bad values") {
  const Grid g = Grid::line(0.0, 1.0, 5);
  CHECK_THROWS_AS(WeightField(GridFunction::constant(g, 0.0)), DomainError);
  CHECK_THROWS_AS(GridFunction(g, Eigen::ArrayXd::Constant(5, NAN)), DomainError);
  CHECK_THROWS_AS(GridFunction(g, Eigen::ArrayXd::Constant(4, 1.0)), DomainError);
  CHECK_THROWS_AS(Grid::line(0.0, 1.0, 1), DomainError);

  const auto w0 = WeightField::sample(g, [](const Point& p) { return 1.0 + p(0); });
  const auto w1 = WeightField::unit(g);
  const auto blend = geometricBlend(w0, w1, 0.5);
  CHECK(blend.values()(4) == doctest::Approx(std::sqrt(2.0)));
  const std::vector<WeightField> ws{w0, w0};
  CHECK(productWeight(ws).values()(4) == doctest::Approx(4.0));
}

TEST_CASE("complex grid functions") {
  const Grid g = Grid::line(0.0, 1.0, 101);
  const auto f = ComplexGridFunction::sample(g, [](const Point& p) { return std::polar(1.0, 3.0 * p(0)); });
  CHECK(std::abs(integrate(abs(f)) - 1.0) < 1e-12);
  CHECK(f.supNorm() == doctest::Approx(1.0));
}
