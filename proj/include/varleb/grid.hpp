#pragma once

#include "varleb/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace varleb {

/// Nodes of a region together with their quadrature weights.
struct RegionMask {
  std::vector<Eigen::Index> nodes;
  Eigen::ArrayXd weights;

  bool empty() const { return nodes.empty(); }
  double measure() const { return weights.sum(); }

  template <typename Derived>
  Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> gather(
      const Eigen::ArrayBase<Derived>& values) const {
    Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> out(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k) out(static_cast<Eigen::Index>(k)) = values(nodes[k]);
    return out;
  }
};

/// Uniform tensor grid over a box in R^n, n <= 2. Nodes include both endpoints of
/// every axis and are stored row-major (axis 0 slowest).
///
/// Each node owns its dual cell [x - h/2, x + h/2] clipped to the box, so the full-box
/// quadrature is the composite trapezoid rule and box-restricted quadrature integrates
/// the cellwise-constant interpolant exactly.
class Grid {
 public:
  Grid(Box box, std::vector<int> resolution);

  static Grid line(double lo, double hi, int resolution) {
    return Grid(Box::interval(lo, hi), {resolution});
  }
  static Grid square(const Box& box, int resolutionPerAxis) {
    return Grid(box, std::vector<int>(static_cast<std::size_t>(box.dim()), resolutionPerAxis));
  }

  int dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  int resolution(int axis) const { return resolution_[static_cast<std::size_t>(axis)]; }
  const std::vector<int>& resolution() const { return resolution_; }
  double step(int axis) const { return step_(axis); }
  double maxStep() const { return step_.maxCoeff(); }
  /// Product of per-axis steps (measure of an interior dual cell).
  double cellVolume() const { return step_.prod(); }
  Eigen::Index size() const { return size_; }

  double coordinate(int axis, Eigen::Index i) const {
    return box_.lo(axis) + static_cast<double>(i) * step_(axis);
  }
  Point node(Eigen::Index flat) const;
  /// Per-axis index of a flat node index.
  std::pair<Eigen::Index, Eigen::Index> multiIndex(Eigen::Index flat) const;
  Eigen::Index flatIndex(Eigen::Index i0, Eigen::Index i1 = 0) const {
    return dim() == 1 ? i0 : i0 * resolution_[1] + i1;
  }
  /// Multilinear interpolation of node values at x (clamped to the box).
  double interpolate(const Eigen::ArrayXd& values, const Point& x) const;
  /// Nearest node to x (clamped to the box).
  Eigen::Index nearestNode(const Point& x) const;

  const Eigen::ArrayXd& weights() const { return weights_; }
  /// Quadrature measure of the whole box.
  double measure() const { return weights_.sum(); }

  /// Boxes get fractional dual-cell overlaps; balls use node membership (center-distance test).
  /// With `complement`, the mask of the box minus the region.
  RegionMask mask(const Region& region, bool complement = false) const;

  bool operator==(const Grid& other) const {
    return resolution_ == other.resolution_ && box_.sameAs(other.box_, 0.0);
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  Eigen::ArrayXd axisOverlap(int axis, double a, double b) const;

  Box box_;
  std::vector<int> resolution_;
  Eigen::Array<double, Eigen::Dynamic, 1, 0, 2, 1> step_;
  Eigen::Index size_ = 0;
  Eigen::ArrayXd weights_;
};

}  // namespace varleb
