#pragma once

#include "varleb/cubes.hpp"
#include "varleb/grid.hpp"
#include "varleb/grid_function.hpp"

namespace varleb {

/// Quadrature of f over the grid box.
template <typename S>
S integrate(const BasicGridFunction<S>& f) {
  return (f.grid().weights().template cast<S>() * f.values()).sum();
}

/// Quadrature of f over `region` (intersected with the grid box).
/// Throws EmptyRegion if no node carries weight in the region.
template <typename S>
S integrate(const BasicGridFunction<S>& f, const Region& region) {
  const RegionMask m = f.grid().mask(region);
  if (m.empty()) throw EmptyRegion("integrate: region captures no grid node");
  return (m.weights.template cast<S>() * m.gather(f.values())).sum();
}

/// ( (1/|B|) * integral over B(center, radius) of |f|^power )^(1/power), where |B| is the
/// quadrature measure of the discrete ball inside the grid box.
double ballAverage(const GridFunction& f, const Point& center, double radius, double power);

}  // namespace varleb
