#include "varleb/field.hpp"

#include <cmath>

namespace varleb {

WeightField::WeightField(GridFunction base) : base_(std::move(base)) {
  const auto& v = base_.values();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!(v(k) > 0.0) || !std::isfinite(v(k)) || !std::isfinite(1.0 / v(k)))
      throw DomainError("weight: value must be in (0, inf) at node " + std::to_string(k));
  }
}

WeightField productWeight(std::span<const WeightField> weights) {
  if (weights.empty()) throw DomainError("productWeight: no weights");
  Eigen::ArrayXd v = weights.front().values();
  for (std::size_t j = 1; j < weights.size(); ++j) {
    detail::requireSameGrid(weights.front().grid(), weights[j].grid(), "productWeight");
    v *= weights[j].values();
  }
  return WeightField(GridFunction(weights.front().grid(), std::move(v)));
}

WeightField geometricBlend(const WeightField& w0, const WeightField& w1, double theta) {
  detail::requireSameGrid(w0.grid(), w1.grid(), "geometricBlend");
  Eigen::ArrayXd v = w0.values().pow(1.0 - theta) * w1.values().pow(theta);
  return WeightField(GridFunction(w0.grid(), std::move(v)));
}

double ballAverage(const GridFunction& f, const Point& center, double radius, double power) {
  if (!(radius > 0.0)) throw DomainError("ballAverage: radius must be positive");
  if (!(power > 0.0)) throw DomainError("ballAverage: power must be positive");
  const RegionMask m = f.grid().mask(Ball{center, radius});
  if (m.empty()) throw EmptyRegion("ballAverage: ball captures no grid node");
  const Eigen::ArrayXd g = m.gather(f.magnitude()).pow(power);
  return std::pow((m.weights * g).sum() / m.measure(), 1.0 / power);
}

}  // namespace varleb
