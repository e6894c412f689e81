#pragma once

#include "varleb/grid_function.hpp"

#include <random>
#include <vector>

namespace varleb {

/// Finite sum of coefficient * indicator(box) with pairwise disjoint boxes.
struct SimpleFunction {
  std::vector<Box> pieces;
  std::vector<double> coefficients;

  /// Closed boxes; a node on a shared edge takes the coefficient of the first piece containing it.
  GridFunction on(const Grid& grid) const;
  std::size_t nonzeroCount() const;
};

struct SimpleFunctionOptions {
  int maxPieces = 8;
  double coefficientLo = 1e-2;
  double coefficientHi = 1e2;
};

/// Random simple function on `box`: 1..maxPieces disjoint slabs along axis 0 (boxes of random
/// height in 2D), log-uniform coefficients.
SimpleFunction randomSimpleFunction(const Box& box, std::mt19937_64& rng, SimpleFunctionOptions opt = {});

}  // namespace varleb
