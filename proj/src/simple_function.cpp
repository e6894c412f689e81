#include "varleb/simple_function.hpp"

#include <algorithm>
#include <cmath>

namespace varleb {

GridFunction SimpleFunction::on(const Grid& grid) const {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const Point x = grid.node(k);
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].contains(x)) {
        v(k) = coefficients[i];
        break;
      }
  }
  return GridFunction(grid, std::move(v));
}

std::size_t SimpleFunction::nonzeroCount() const {
  return static_cast<std::size_t>(std::count_if(coefficients.begin(), coefficients.end(), [](double c) { return c != 0.0; }));
}

SimpleFunction randomSimpleFunction(const Box& box, std::mt19937_64& rng, SimpleFunctionOptions opt) {
  std::uniform_int_distribution<int> count(1, std::max(1, opt.maxPieces));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> logc(std::log(opt.coefficientLo), std::log(opt.coefficientHi));

  const int k = count(rng);
  std::vector<double> cuts(static_cast<std::size_t>(2 * k));
  for (double& c : cuts) c = box.lo(0) + unit(rng) * (box.hi(0) - box.lo(0));
  std::sort(cuts.begin(), cuts.end());

  SimpleFunction s;
  for (int i = 0; i < k; ++i) {
    Box piece = box;
    piece.lo(0) = cuts[static_cast<std::size_t>(2 * i)];
    piece.hi(0) = cuts[static_cast<std::size_t>(2 * i + 1)];
    if (box.dim() == 2) {
      double a = box.lo(1) + unit(rng) * (box.hi(1) - box.lo(1));
      double b = box.lo(1) + unit(rng) * (box.hi(1) - box.lo(1));
      piece.lo(1) = std::min(a, b);
      piece.hi(1) = std::max(a, b);
    }
    s.pieces.push_back(piece);
    s.coefficients.push_back(std::exp(logc(rng)));
  }
  return s;
}

}  // namespace varleb
