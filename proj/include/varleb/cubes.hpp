#pragma once

#include "varleb/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace varleb {

struct CubeId {
  int depth = 0;
  bool shifted = false;
  std::array<int, 2> index{0, 0};

  std::string str() const;
  bool operator==(const CubeId&) const = default;
};

struct DyadicCube {
  Box box;
  CubeId id;
};

/// Dyadic subdivisions of a root box down to `maxDepth`, optionally with one
/// half-cell translated copy per depth. Translated cubes that would leave the
/// root box are dropped, so the shifted family at depth d has (2^d - 1)^n cubes.
/// Suprema over this set are lower bounds for suprema over all cubes.
class DyadicCubeSet {
 public:
  DyadicCubeSet(Box root, int maxDepth, bool shifted = true);

  const Box& root() const { return root_; }
  int maxDepth() const { return maxDepth_; }
  bool shifted() const { return shifted_; }

  /// Depth-major; within a depth, lexicographic by lower corner.
  std::vector<DyadicCube> enumerate() const;
  std::size_t count() const;
  std::string describe() const;

 private:
  Box root_;
  int maxDepth_;
  bool shifted_;
};

inline std::vector<DyadicCube> enumerateCubes(const DyadicCubeSet& set) { return set.enumerate(); }

}  // namespace varleb
