#pragma once

#include "varleb/exponent.hpp"
#include "varleb/grid_function.hpp"
#include "varleb/simple_function.hpp"

#include <cmath>
#include <random>

namespace varleb::testing {

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

/// A random exponent on `box` with values inside [lo, hi].
inline ExponentField randomExponent(const Box& box, std::mt19937_64& rng, double lo, double hi) {
  const double span = hi - lo;
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
      return ExponentField::constant(box, uniform(rng, lo, hi));
    case 1: {
      const double a = uniform(rng, lo, hi), b = uniform(rng, lo, hi);
      const double w = box.hi(0) - box.lo(0);
      const double slope = (b - a) / w;
      Point g = Point::Zero(box.dim());
      g(0) = slope;
      return ExponentField::affine(box, a - slope * box.lo(0), g);
    }
    case 2: {
      const double base = uniform(rng, lo, lo + 0.5 * span);
      const double amp = uniform(rng, 0.0, 0.5 * span);
      return ExponentField::logDecay(box, base, amp, box.center());
    }
    case 3: {
      const double mid = 0.5 * (box.lo(0) + box.hi(0));
      return ExponentField::piecewise(box, {mid}, {uniform(rng, lo, hi), uniform(rng, lo, hi)});
    }
    default: {
      const Grid g = Grid::square(box, 9);
      Eigen::ArrayXd v(g.size());
      for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = uniform(rng, lo, hi);
      return ExponentField::sampled(g, v);
    }
  }
}

/// Random nonnegative-coefficient function mixing smooth bumps and a simple function, scaled
/// over several orders of magnitude.
inline GridFunction randomFunction(const Grid& grid, std::mt19937_64& rng) {
  const Box& box = grid.box();
  const double scale = std::pow(10.0, uniform(rng, -2.0, 2.0));
  const Point c = box.lo + (box.hi - box.lo).cwiseProduct(Point::NullaryExpr(box.dim(), [&] { return uniform(rng, 0.2, 0.8); }));
  const double width = uniform(rng, 0.05, 0.4) * (box.hi - box.lo).minCoeff();
  const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  const GridFunction smooth =
      GridFunction::sample(grid, [&](const Point& x) { return sign * std::exp(-(x - c).squaredNorm() / (width * width)); });
  const GridFunction steps = randomSimpleFunction(box, rng, {4, 0.1, 1.0}).on(grid);
  return scale * (smooth + steps);
}

}  // namespace varleb::testing
