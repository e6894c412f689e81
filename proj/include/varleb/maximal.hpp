#pragma once

#include "varleb/cubes.hpp"
#include "varleb/exponent.hpp"
#include "varleb/field.hpp"
#include "varleb/weights.hpp"

#include <vector>

namespace varleb {

/// Increasing positive radii standing in for sup over r > 0.
struct RadiusSweep {
  std::vector<double> radii;

  /// `count` radii geometrically spaced from rMin to rMax inclusive.
  static RadiusSweep geometric(double rMin, double rMax, int count);
  /// anchor * ratio^k for k = 0..count-1.
  static RadiusSweep ladder(double anchor, double ratio, int count);
  /// 64 radii from the grid step to the box diameter.
  static RadiusSweep defaultFor(const Grid& grid, int count = 64);

  std::size_t count() const { return radii.size(); }
};

/// (M f)(x) = max over the sweep of ( avg_{B(x,r)} |f|^qTilde )^(1/qTilde), balls open and
/// discretised by node membership. A radius at or below the grid step gives |f(x)|.
GridFunction maximalFunction(const GridFunction& f, double qTilde, const RadiusSweep& sweep);

/// Signed ball means x -> avg_{B(x,r)} f, with the same node membership as maximalFunction.
GridFunction ballMeans(const GridFunction& f, double radius);

/// x -> ( avg_{B(x,r)} |f(x) - f(y)|^qTilde dy )^(1/qTilde).
GridFunction oscillationAverage(const GridFunction& f, double radius, double qTilde);

struct MaximalProbeReport {
  double maxRatio = 0.0;
  std::vector<double> ratios;  // ||M f||/||f|| in L^p(w), corpus order; NaN for f = 0
  double hypothesisConstant = 0.0;
  WeightConstantReport hypothesis;
};

/// Ratios ||M_qTilde f||_{L^p(w)} / ||f||_{L^p(w)} over a corpus, after checking that
/// [w^qTilde]_{A_{p/qTilde}} is finite on `cubes` (HypothesisFailure otherwise).
MaximalProbeReport maximalBoundednessProbe(const ExponentField& p, const WeightField& w, double qTilde,
                                           const std::vector<GridFunction>& corpus, const RadiusSweep& sweep,
                                           const DyadicCubeSet& cubes, double relTol = kDefaultRelTol);

}  // namespace varleb
