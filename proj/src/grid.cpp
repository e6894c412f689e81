#include "varleb/grid.hpp"

#include "varleb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varleb {

Grid::Grid(Box box, std::vector<int> resolution) : box_(std::move(box)), resolution_(std::move(resolution)) {
  const int n = box_.dim();
  if (n < 1 || n > 2) throw DomainError("grid: only n = 1 or n = 2 is supported");
  if (static_cast<int>(resolution_.size()) != n)
    throw DomainError("grid: resolution must have one entry per axis");
  step_.resize(n);
  size_ = 1;
  for (int a = 0; a < n; ++a) {
    if (resolution_[static_cast<std::size_t>(a)] < 2) throw DomainError("grid: resolution must be >= 2 per axis");
    if (!(box_.hi(a) > box_.lo(a))) throw DomainError("grid: empty box along axis " + std::to_string(a));
    step_(a) = (box_.hi(a) - box_.lo(a)) / (resolution_[static_cast<std::size_t>(a)] - 1);
    size_ *= resolution_[static_cast<std::size_t>(a)];
  }

  Eigen::ArrayXd w0 = axisOverlap(0, box_.lo(0), box_.hi(0));
  if (n == 1) {
    weights_ = w0;
  } else {
    Eigen::ArrayXd w1 = axisOverlap(1, box_.lo(1), box_.hi(1));
    weights_.resize(size_);
    for (Eigen::Index i = 0; i < w0.size(); ++i)
      weights_.segment(i * w1.size(), w1.size()) = w0(i) * w1;
  }
}

Point Grid::node(Eigen::Index flat) const {
  auto [i0, i1] = multiIndex(flat);
  if (dim() == 1) return point(coordinate(0, i0));
  return point(coordinate(0, i0), coordinate(1, i1));
}

std::pair<Eigen::Index, Eigen::Index> Grid::multiIndex(Eigen::Index flat) const {
  if (dim() == 1) return {flat, 0};
  const Eigen::Index r1 = resolution_[1];
  return {flat / r1, flat % r1};
}

Eigen::Index Grid::nearestNode(const Point& x) const {
  Eigen::Index idx[2] = {0, 0};
  for (int a = 0; a < dim(); ++a) {
    double t = std::round((x(a) - box_.lo(a)) / step_(a));
    t = std::clamp(t, 0.0, static_cast<double>(resolution_[static_cast<std::size_t>(a)] - 1));
    idx[a] = static_cast<Eigen::Index>(t);
  }
  return flatIndex(idx[0], idx[1]);
}

Eigen::ArrayXd Grid::axisOverlap(int axis, double a, double b) const {
  const int r = resolution_[static_cast<std::size_t>(axis)];
  const double lo = box_.lo(axis), hi = box_.hi(axis), h = step_(axis);
  a = std::max(a, lo);
  b = std::min(b, hi);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(r);
  if (!(b > a)) return out;
  for (int i = 0; i < r; ++i) {
    const double x = lo + i * h;
    const double cl = i == 0 ? lo : x - 0.5 * h;
    const double ch = i == r - 1 ? hi : x + 0.5 * h;
    out(i) = std::max(0.0, std::min(ch, b) - std::max(cl, a));
  }
  return out;
}

RegionMask Grid::mask(const Region& region, bool complement) const {
  RegionMask m;
  std::vector<double> w;
  auto push = [&](Eigen::Index k, double weight) {
    if (weight > 0.0) {
      m.nodes.push_back(k);
      w.push_back(weight);
    }
  };

  if (const auto* b = std::get_if<Box>(&region)) {
    if (b->dim() != dim()) throw DomainError("grid mask: region dimension mismatch");
    Eigen::ArrayXd o0 = axisOverlap(0, b->lo(0), b->hi(0));
    Eigen::ArrayXd o1 = dim() == 2 ? axisOverlap(1, b->lo(1), b->hi(1)) : Eigen::ArrayXd::Ones(1);
    if (complement) {
      for (Eigen::Index k = 0; k < size_; ++k) {
        auto [i0, i1] = multiIndex(k);
        push(k, std::max(0.0, weights_(k) - o0(i0) * o1(i1)));
      }
    } else {
      for (Eigen::Index i0 = 0; i0 < o0.size(); ++i0) {
        if (o0(i0) == 0.0) continue;
        for (Eigen::Index i1 = 0; i1 < o1.size(); ++i1) push(flatIndex(i0, i1), o0(i0) * o1(i1));
      }
    }
  } else {
    const auto& ball = std::get<Ball>(region);
    if (ball.center.size() != dim()) throw DomainError("grid mask: ball dimension mismatch");
    for (Eigen::Index k = 0; k < size_; ++k) {
      const bool inside = ball.contains(node(k));
      if (inside != complement) push(k, weights_(k));
    }
  }
  m.weights = Eigen::Map<Eigen::ArrayXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return m;
}

double Grid::interpolate(const Eigen::ArrayXd& values, const Point& x) const {
  Eigen::Index i[2] = {0, 0};
  double t[2] = {0.0, 0.0};
  for (int d = 0; d < dim(); ++d) {
    const double u = (x(d) - box_.lo(d)) / step_(d);
    const double cell = std::clamp(std::floor(u), 0.0, static_cast<double>(resolution(d) - 2));
    i[d] = static_cast<Eigen::Index>(cell);
    t[d] = std::clamp(u - cell, 0.0, 1.0);
  }
  if (dim() == 1) return (1.0 - t[0]) * values(i[0]) + t[0] * values(i[0] + 1);
  const double v00 = values(flatIndex(i[0], i[1])), v01 = values(flatIndex(i[0], i[1] + 1));
  const double v10 = values(flatIndex(i[0] + 1, i[1])), v11 = values(flatIndex(i[0] + 1, i[1] + 1));
  return (1.0 - t[0]) * ((1.0 - t[1]) * v00 + t[1] * v01) + t[0] * ((1.0 - t[1]) * v10 + t[1] * v11);
}

}  // namespace varleb
