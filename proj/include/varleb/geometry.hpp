#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <variant>

namespace varleb {

/// A point of R^n with n <= 2; fixed max size keeps it off the heap.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;

inline Point point(double x) {
  Point p(1);
  p << x;
  return p;
}

inline Point point(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

/// Axis-aligned box [lo, hi] in R^n. Cubes are boxes with equal side lengths.
struct Box {
  Point lo;
  Point hi;

  static Box interval(double a, double b) { return {point(a), point(b)}; }
  static Box rectangle(double x0, double x1, double y0, double y1) {
    return {point(x0, y0), point(x1, y1)};
  }

  int dim() const { return static_cast<int>(lo.size()); }
  double measure() const { return (hi - lo).prod(); }
  Point center() const { return 0.5 * (lo + hi); }
  double diameter() const { return (hi - lo).norm(); }

  bool contains(const Point& x, double slack = 0.0) const {
    return ((x.array() >= lo.array() - slack) && (x.array() <= hi.array() + slack)).all();
  }
  bool containsBox(const Box& other, double slack = 1e-12) const {
    return contains(other.lo, slack) && contains(other.hi, slack);
  }
  bool sameAs(const Box& other, double slack = 1e-12) const {
    return dim() == other.dim() && ((lo - other.lo).cwiseAbs().array() <= slack).all() &&
           ((hi - other.hi).cwiseAbs().array() <= slack).all();
  }

  /// Largest r with B(x, r) inside the box.
  double inscribedRadius(const Point& x) const {
    return std::min((x - lo).minCoeff(), (hi - x).minCoeff());
  }
};

/// Open Euclidean ball.
struct Ball {
  Point center;
  double radius;

  bool contains(const Point& x) const { return (x - center).norm() < radius; }
};

using Region = std::variant<Box, Ball>;

}  // namespace varleb
