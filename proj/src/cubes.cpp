#include "varleb/cubes.hpp"

#include "varleb/errors.hpp"

#include <algorithm>
#include <sstream>

namespace varleb {

std::string CubeId::str() const {
  std::ostringstream os;
  os << "d" << depth << (shifted ? "s" : "") << "[" << index[0];
  os << "," << index[1] << "]";
  return os.str();
}

DyadicCubeSet::DyadicCubeSet(Box root, int maxDepth, bool shifted)
    : root_(std::move(root)), maxDepth_(maxDepth), shifted_(shifted) {
  if (maxDepth_ < 0) throw DomainError("cube set: maxDepth must be >= 0");
  if (maxDepth_ > 24) throw DomainError("cube set: maxDepth too large");
}

std::vector<DyadicCube> DyadicCubeSet::enumerate() const {
  const int n = root_.dim();
  const Point side = root_.hi - root_.lo;
  std::vector<DyadicCube> out;
  for (int d = 0; d <= maxDepth_; ++d) {
    std::vector<DyadicCube> level;
    const int cells = 1 << d;
    const Point cell = side / static_cast<double>(cells);
    for (int pass = 0; pass < (shifted_ ? 2 : 1); ++pass) {
      const bool shift = pass == 1;
      const int count = shift ? cells - 1 : cells;
      const int c1 = n == 2 ? count : 1;
      for (int i = 0; i < count; ++i) {
        for (int j = 0; j < c1; ++j) {
          Point lo = root_.lo;
          lo(0) += (i + (shift ? 0.5 : 0.0)) * cell(0);
          if (n == 2) lo(1) += (j + (shift ? 0.5 : 0.0)) * cell(1);
          level.push_back({Box{lo, Point(lo + cell)}, CubeId{d, shift, {i, n == 2 ? j : 0}}});
        }
      }
    }
    std::stable_sort(level.begin(), level.end(), [n](const DyadicCube& a, const DyadicCube& b) {
      if (a.box.lo(0) != b.box.lo(0)) return a.box.lo(0) < b.box.lo(0);
      return n == 2 && a.box.lo(1) < b.box.lo(1);
    });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::size_t DyadicCubeSet::count() const {
  const int n = root_.dim();
  std::size_t total = 0;
  for (int d = 0; d <= maxDepth_; ++d) {
    std::size_t plain = 1, shifted = 1;
    for (int a = 0; a < n; ++a) {
      plain *= std::size_t{1} << d;
      shifted *= (std::size_t{1} << d) - 1;
    }
    total += plain + (shifted_ ? shifted : 0);
  }
  return total;
}

std::string DyadicCubeSet::describe() const {
  std::ostringstream os;
  os << "dyadic cubes of [";
  for (int a = 0; a < root_.dim(); ++a) os << (a ? " x " : "") << root_.lo(a) << "," << root_.hi(a);
  os << "] to depth " << maxDepth_ << (shifted_ ? " with half-cell shifted family" : "") << " (" << count()
     << " cubes; suprema are lower bounds)";
  return os.str();
}

}  // namespace varleb
