#pragma once

#include "varleb/errors.hpp"
#include "varleb/grid.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <span>

namespace varleb {

/// Node values of a function on a Grid. Outside the grid box the function is zero.
template <typename Scalar>
class BasicGridFunction {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicGridFunction(Grid grid, Values values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw DomainError("grid function: value count does not match grid");
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      if (!std::isfinite(std::abs(values_(i))))
        throw DomainError("grid function: non-finite value at node " + std::to_string(i));
  }

  static BasicGridFunction constant(const Grid& grid, Scalar c) {
    return BasicGridFunction(grid, Values::Constant(grid.size(), c));
  }
  static BasicGridFunction zero(const Grid& grid) { return constant(grid, Scalar(0)); }

  /// Samples `f(Point) -> Scalar` at every node.
  template <typename F>
  static BasicGridFunction sample(const Grid& grid, F&& f) {
    Values v(grid.size());
    for (Eigen::Index k = 0; k < grid.size(); ++k) v(k) = static_cast<Scalar>(f(grid.node(k)));
    return BasicGridFunction(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Scalar operator[](Eigen::Index k) const { return values_(k); }
  Eigen::Index size() const { return values_.size(); }

  Eigen::ArrayXd magnitude() const { return values_.abs().template cast<double>(); }
  double supNorm() const { return values_.size() ? magnitude().maxCoeff() : 0.0; }

 private:
  Grid grid_;
  Values values_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

namespace detail {
inline void requireSameGrid(const Grid& a, const Grid& b, const char* op) {
  if (a != b) throw DomainError(std::string(op) + ": grid functions live on different grids");
}
}  // namespace detail

template <typename S>
BasicGridFunction<S> operator+(const BasicGridFunction<S>& f, const BasicGridFunction<S>& g) {
  detail::requireSameGrid(f.grid(), g.grid(), "operator+");
  return {f.grid(), f.values() + g.values()};
}

template <typename S>
BasicGridFunction<S> operator-(const BasicGridFunction<S>& f, const BasicGridFunction<S>& g) {
  detail::requireSameGrid(f.grid(), g.grid(), "operator-");
  return {f.grid(), f.values() - g.values()};
}

/// Pointwise product.
template <typename S>
BasicGridFunction<S> operator*(const BasicGridFunction<S>& f, const BasicGridFunction<S>& g) {
  detail::requireSameGrid(f.grid(), g.grid(), "operator*");
  return {f.grid(), f.values() * g.values()};
}

template <typename S>
BasicGridFunction<S> operator*(S c, const BasicGridFunction<S>& f) {
  return {f.grid(), c * f.values()};
}

template <typename S>
BasicGridFunction<double> abs(const BasicGridFunction<S>& f) {
  return {f.grid(), f.magnitude()};
}

/// |f|^s pointwise.
template <typename S>
GridFunction absPow(const BasicGridFunction<S>& f, double s) {
  return {f.grid(), f.magnitude().pow(s)};
}

/// A strictly positive, finite grid function.
class WeightField {
 public:
  explicit WeightField(GridFunction base);

  static WeightField unit(const Grid& grid) { return WeightField(GridFunction::constant(grid, 1.0)); }
  template <typename F>
  static WeightField sample(const Grid& grid, F&& f) {
    return WeightField(GridFunction::sample(grid, std::forward<F>(f)));
  }

  const GridFunction& function() const { return base_; }
  const Grid& grid() const { return base_.grid(); }
  const Eigen::ArrayXd& values() const { return base_.values(); }

  WeightField pow(double s) const { return WeightField(GridFunction(grid(), values().pow(s))); }
  WeightField inverse() const { return WeightField(GridFunction(grid(), values().inverse())); }
  WeightField scaled(double c) const { return WeightField(GridFunction(grid(), c * values())); }

 private:
  GridFunction base_;
};

/// nu = prod_j w_j.
WeightField productWeight(std::span<const WeightField> weights);

/// w0^(1-theta) * w1^theta.
WeightField geometricBlend(const WeightField& w0, const WeightField& w1, double theta);

}  // namespace varleb
