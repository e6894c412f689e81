#include "varleb/exponent.hpp"

#include "varleb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace varleb {

namespace detail {

struct ExponentNode {
  enum class Kind { Constant, Affine, LogDecay, Piecewise, Sampled, Reciprocal };

  Kind kind = Kind::Constant;
  double a = 0.0;  // constant value, affine offset, log-decay base
  double b = 0.0;  // log-decay amplitude
  Point vec;       // affine gradient, log-decay center
  std::vector<double> breaks;
  std::vector<double> values;
  int axis = 0;
  std::optional<Grid> grid;
  Eigen::ArrayXd samples;
  double c0 = 0.0;
  std::vector<std::pair<double, ExponentField>> terms;

  double reciprocal(const Point& x) const {
    double v = c0;
    for (const auto& [c, p] : terms) v += c / p(x);
    return v;
  }

  double eval(const Point& x) const {
    switch (kind) {
      case Kind::Constant:
        return a;
      case Kind::Affine:
        return a + vec.dot(x);
      case Kind::LogDecay:
        return a + b / std::log(std::numbers::e + (x - vec).norm());
      case Kind::Piecewise: {
        std::size_t i = 0;
        while (i < breaks.size() && x(axis) > breaks[i]) ++i;
        return values[i];
      }
      case Kind::Sampled:
        return grid->interpolate(samples, x);
      case Kind::Reciprocal:
        return 1.0 / reciprocal(x);
    }
    return 0.0;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
      case Kind::Constant:
        os << "constant(" << a << ")";
        break;
      case Kind::Affine:
        os << "affine(" << a << " + [" << vec.transpose() << "].x)";
        break;
      case Kind::LogDecay:
        os << "log_decay(" << a << " + " << b << "/log(e+|x-[" << vec.transpose() << "]|))";
        break;
      case Kind::Piecewise:
        os << "piecewise(axis " << axis << ", " << values.size() << " pieces)";
        break;
      case Kind::Sampled:
        os << "grid(" << samples.size() << " nodes)";
        break;
      case Kind::Reciprocal:
        os << "1/(" << c0;
        for (const auto& [c, p] : terms) os << " + " << c << "/" << p.describe();
        os << ")";
        break;
    }
    return os.str();
  }
};

}  // namespace detail

using Node = detail::ExponentNode;

namespace {

int defaultResolution(const Box& box) {
  return box.dim() == 1 ? ExponentField::kDefaultResolution1d : ExponentField::kDefaultResolution2d;
}

void requireFinite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("exponent: non-finite ") + what);
}

std::vector<Point> corners(const Box& box) {
  std::vector<Point> out;
  if (box.dim() == 1) return {box.lo, box.hi};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.push_back(point(i ? box.hi(0) : box.lo(0), j ? box.hi(1) : box.lo(1)));
  return out;
}

Point farthestCorner(const Box& box) {
  Point best = box.lo;
  for (const Point& c : corners(box))
    if (c.norm() > best.norm()) best = c;
  return best;
}

}  // namespace

ExponentField::ExponentField(std::shared_ptr<const detail::ExponentNode> node, Box domain, int resolution)
    : node_(std::move(node)), domain_(std::move(domain)), resolution_(resolution) {
  if (domain_.dim() < 1 || domain_.dim() > 2) throw DomainError("exponent: domain must have dimension 1 or 2");
  if (!(domain_.hi.array() > domain_.lo.array()).all()) throw DomainError("exponent: empty domain");
  if (resolution_ < 2) throw DomainError("exponent: resolution must be >= 2");
  computeExtremes();
}

Grid ExponentField::scanGrid() const { return Grid::square(domain_, resolution_); }

void ExponentField::computeExtremes() {
  const Node& n = *node_;
  std::optional<Point> lowPoint;
  switch (n.kind) {
    case Node::Kind::Constant:
      pMinus_ = pPlus_ = n.a;
      pInfinity_ = n.a;
      lowPoint = domain_.lo;
      break;
    case Node::Kind::Affine: {
      pMinus_ = kInfinity;
      pPlus_ = -kInfinity;
      for (const Point& c : corners(domain_)) {
        const double v = n.eval(c);
        if (v < pMinus_) {
          pMinus_ = v;
          lowPoint = c;
        }
        pPlus_ = std::max(pPlus_, v);
      }
      if (n.vec.isZero()) pInfinity_ = n.a;
      break;
    }
    case Node::Kind::LogDecay: {
      const Point nearest = n.vec.cwiseMax(domain_.lo).cwiseMin(domain_.hi);
      Point far = domain_.lo;
      for (const Point& c : corners(domain_))
        if ((c - n.vec).norm() > (far - n.vec).norm()) far = c;
      const double vNear = n.eval(nearest), vFar = n.eval(far);
      pMinus_ = std::min(vNear, vFar);
      pPlus_ = std::max(vNear, vFar);
      lowPoint = vNear <= vFar ? nearest : far;
      pInfinity_ = n.a;
      break;
    }
    case Node::Kind::Piecewise: {
      const double lo = domain_.lo(n.axis), hi = domain_.hi(n.axis);
      pMinus_ = kInfinity;
      pPlus_ = -kInfinity;
      for (std::size_t i = 0; i < n.values.size(); ++i) {
        const double left = i == 0 ? -kInfinity : n.breaks[i - 1];
        const double right = i == n.breaks.size() ? kInfinity : n.breaks[i];
        if (!(left < hi && right >= lo)) continue;
        if (n.values[i] < pMinus_) {
          pMinus_ = n.values[i];
          lowPoint = domain_.lo;
          (*lowPoint)(n.axis) = std::clamp(std::isfinite(right) ? right : hi, lo, hi);
        }
        pPlus_ = std::max(pPlus_, n.values[i]);
      }
      break;
    }
    case Node::Kind::Sampled: {
      Eigen::Index k = 0;
      pMinus_ = n.samples.minCoeff(&k);
      pPlus_ = n.samples.maxCoeff();
      lowPoint = n.grid->node(k);
      break;
    }
    case Node::Kind::Reciprocal: {
      if (n.terms.size() == 1) {
        const auto& [c, child] = n.terms.front();
        const double v1 = n.c0 + c / child.pPlus(), v2 = n.c0 + c / child.pMinus();
        const double vMin = std::min(v1, v2), vMax = std::max(v1, v2);
        if (vMin > 0.0) {
          pMinus_ = 1.0 / vMax;
          pPlus_ = 1.0 / vMin;
          break;
        }
      }
      // Dense scan; also used to locate the offending point for a single-term map.
      const Grid g = scanGrid();
      pMinus_ = kInfinity;
      pPlus_ = -kInfinity;
      double worst = kInfinity;
      Eigen::Index worstNode = 0;
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        const double v = n.reciprocal(g.node(k));
        if (!(v < worst)) continue;
        worst = v;
        worstNode = k;
      }
      if (!(worst > 0.0) || !std::isfinite(1.0 / worst)) {
        std::ostringstream os;
        os << "exponent: 1/p = " << worst << " is not positive at x = [" << g.node(worstNode).transpose() << "]";
        throw RangeError(os.str(), g.node(worstNode));
      }
      if (n.terms.size() == 1) {
        // The exact endpoint map found a nonpositive value the scan missed; refuse anyway.
        throw RangeError("exponent: 1/p is not positive on the domain", g.node(worstNode));
      }
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        const double p = 1.0 / n.reciprocal(g.node(k));
        pMinus_ = std::min(pMinus_, p);
        pPlus_ = std::max(pPlus_, p);
      }
      break;
    }
  }

  if (n.kind == Node::Kind::Reciprocal) {
    bool all = true;
    double inv = n.c0;
    for (const auto& [c, child] : n.terms) {
      if (!child.pInfinity()) {
        all = false;
        break;
      }
      inv += c / *child.pInfinity();
    }
    if (all && inv > 0.0) pInfinity_ = 1.0 / inv;
  }

  if (!(pMinus_ > 0.0)) {
    std::ostringstream os;
    os << "exponent: p- = " << pMinus_ << " is not positive";
    throw RangeError(os.str(), lowPoint);
  }
  if (!std::isfinite(pPlus_)) throw RangeError("exponent: p+ is not finite");
}

ExponentField ExponentField::constant(const Box& domain, double value) {
  requireFinite(value, "constant");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->a = value;
  return ExponentField(std::move(n), domain, defaultResolution(domain));
}

ExponentField ExponentField::affine(const Box& domain, double offset, const Point& gradient) {
  requireFinite(offset, "offset");
  if (gradient.size() != domain.dim()) throw DomainError("exponent: gradient dimension does not match domain");
  if (!gradient.allFinite()) throw DomainError("exponent: non-finite gradient");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Affine;
  n->a = offset;
  n->vec = gradient;
  return ExponentField(std::move(n), domain, defaultResolution(domain));
}

ExponentField ExponentField::logDecay(const Box& domain, double base, double amplitude, const Point& center) {
  requireFinite(base, "base");
  requireFinite(amplitude, "amplitude");
  if (center.size() != domain.dim()) throw DomainError("exponent: center dimension does not match domain");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::LogDecay;
  n->a = base;
  n->b = amplitude;
  n->vec = center;
  return ExponentField(std::move(n), domain, defaultResolution(domain));
}

ExponentField ExponentField::piecewise(const Box& domain, std::vector<double> breaks, std::vector<double> values,
                                       int axis) {
  if (values.size() != breaks.size() + 1) throw DomainError("exponent: piecewise needs one more value than breaks");
  if (axis < 0 || axis >= domain.dim()) throw DomainError("exponent: piecewise axis out of range");
  if (!std::is_sorted(breaks.begin(), breaks.end())) throw DomainError("exponent: piecewise breaks must be sorted");
  for (double b : breaks) requireFinite(b, "break");
  for (double v : values) requireFinite(v, "piece value");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Piecewise;
  n->breaks = std::move(breaks);
  n->values = std::move(values);
  n->axis = axis;
  return ExponentField(std::move(n), domain, defaultResolution(domain));
}

ExponentField ExponentField::sampled(const Grid& grid, Eigen::ArrayXd values) {
  if (values.size() != grid.size()) throw DomainError("exponent: sample count does not match grid");
  if (!values.allFinite()) throw DomainError("exponent: non-finite sample");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Sampled;
  n->grid = grid;
  n->samples = std::move(values);
  int res = 2;
  for (int r : grid.resolution()) res = std::max(res, r);
  return ExponentField(std::move(n), grid.box(), res);
}

ExponentField ExponentField::reciprocalAffine(double c0,
                                              const std::vector<std::pair<double, ExponentField>>& terms) {
  requireFinite(c0, "reciprocal offset");
  if (terms.empty()) {
    if (!(c0 > 0.0)) throw RangeError("exponent: 1/p is not positive");
    throw DomainError("exponent: reciprocal map needs at least one term to fix the domain");
  }
  const Box& domain = terms.front().second.domain();
  int res = 2;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Reciprocal;
  n->c0 = c0;
  for (const auto& [c, p] : terms) {
    requireFinite(c, "reciprocal coefficient");
    if (!p.domain().sameAs(domain)) throw DomainError("exponent: mismatched domains");
    res = std::max(res, p.resolution());
    if (c == 0.0) continue;
    if (auto v = p.constantValue()) {
      n->c0 += c / *v;
    } else if (p.node_->kind == Node::Kind::Reciprocal && !p.node_->terms.empty()) {
      // Flatten nested maps so extremes of one-child chains stay exact.
      n->c0 += c * p.node_->c0;
      for (const auto& [cc, pp] : p.node_->terms) n->terms.emplace_back(c * cc, pp);
    } else {
      n->terms.emplace_back(c, p);
    }
  }
  if (n->terms.empty()) {
    if (!(n->c0 > 0.0) || !std::isfinite(1.0 / n->c0)) {
      std::ostringstream os;
      os << "exponent: 1/p = " << n->c0 << " is not positive";
      throw RangeError(os.str(), domain.lo);
    }
    ExponentField out = constant(domain, 1.0 / n->c0);
    out.resolution_ = res;
    return out;
  }
  return ExponentField(std::move(n), domain, res);
}

double ExponentField::operator()(const Point& x) const { return node_->eval(x); }

Eigen::ArrayXd ExponentField::sample(const Grid& grid) const {
  if (grid.dim() != domain_.dim()) throw DomainError("exponent: grid dimension does not match domain");
  if (auto v = constantValue()) return Eigen::ArrayXd::Constant(grid.size(), *v);
  Eigen::ArrayXd out(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) out(k) = node_->eval(grid.node(k));
  return out;
}

std::optional<double> ExponentField::constantValue() const {
  if (node_->kind == Node::Kind::Constant) return node_->a;
  if (pMinus_ == pPlus_ && node_->kind != Node::Kind::Sampled && node_->kind != Node::Kind::Reciprocal) return pMinus_;
  return std::nullopt;
}

ExponentField ExponentField::withResolution(int resolution) const {
  ExponentField out(node_, domain_, resolution);
  out.pInfinity_ = pInfinity_;
  return out;
}

ExponentField ExponentField::withPInfinity(double pInf) const {
  if (!(pInf > 0.0) || !std::isfinite(pInf)) throw DomainError("exponent: p_infinity must be in (0, inf)");
  ExponentField out = *this;
  out.pInfinity_ = pInf;
  return out;
}

std::string ExponentField::describe() const { return node_->describe(); }

ExponentField dualExponent(const ExponentField& p) {
  if (!(p.pMinus() > 1.0)) throw DomainError("dualExponent: requires p- > 1");
  return ExponentField::reciprocalAffine(1.0, {{-1.0, p}});
}

ExponentField harmonicCombine(std::span<const ExponentField> ps) {
  if (ps.empty()) throw DomainError("harmonicCombine: no exponents");
  std::vector<std::pair<double, ExponentField>> terms;
  for (const auto& p : ps) {
    if (!p.domain().sameAs(ps.front().domain())) throw DomainError("harmonicCombine: mismatched domains");
    terms.emplace_back(1.0, p);
  }
  return ExponentField::reciprocalAffine(0.0, terms);
}

ExponentField thetaBlend(const ExponentField& p0, const ExponentField& p1, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("thetaBlend: theta must lie in (0,1)");
  if (!p0.domain().sameAs(p1.domain())) throw DomainError("thetaBlend: mismatched domains");
  return ExponentField::reciprocalAffine(0.0, {{1.0 - theta, p0}, {theta, p1}});
}

ExponentField thetaInvert(const ExponentField& p, const ExponentField& p1, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("thetaInvert: theta must lie in (0,1)");
  if (!p.domain().sameAs(p1.domain())) throw DomainError("thetaInvert: mismatched domains");
  try {
    return ExponentField::reciprocalAffine(0.0, {{1.0 / (1.0 - theta), p}, {-theta / (1.0 - theta), p1}});
  } catch (const RangeError& e) {
    std::ostringstream os;
    os << "thetaInvert: 1/p - theta/p1 <= 0 (theta = " << theta << ")";
    if (e.where()) os << " at x = [" << e.where()->transpose() << "]";
    throw RangeError(os.str(), e.where());
  }
}

ExponentField scaleExponent(const ExponentField& p, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("scaleExponent: factor must be in (0, inf)");
  return ExponentField::reciprocalAffine(0.0, {{1.0 / s, p}});
}

ExponentField reciprocalShift(const ExponentField& p, double shift) {
  return ExponentField::reciprocalAffine(-shift, {{1.0, p}});
}

ExponentField reciprocalComplement(double r, const ExponentField& p) {
  if (!(r > 0.0)) throw DomainError("reciprocalComplement: r must be positive");
  return ExponentField::reciprocalAffine(1.0 / r, {{-1.0, p}});
}

LogHolderReport logHolderEstimate(const ExponentField& p, std::size_t budget) {
  LogHolderReport rep;
  const Box& box = p.domain();
  rep.pInfinity = p.pInfinity() ? *p.pInfinity() : p(farthestCorner(box));
  if (budget < 2) return rep;

  auto tail = [&](const Point& x, double px) {
    rep.cInfEstimate = std::max(rep.cInfEstimate, std::abs(px - rep.pInfinity) * std::log(std::numbers::e + x.norm()));
  };
  auto pair = [&](const Point& x, const Point& y) {
    const double d = (x - y).norm();
    const double px = p(x), py = p(y);
    rep.c0Estimate = std::max(rep.c0Estimate, std::abs(px - py) * -std::log(d));
    tail(x, px);
    tail(y, py);
    ++rep.samplePairs;
    return rep.samplePairs < budget;
  };

  const int n = box.dim();
  const Point side = box.hi - box.lo;
  for (int level = 0; level < 52; ++level) {
    const double cells = std::ldexp(1.0, level);
    const Point h = side / cells;
    if (h.minCoeff() <= 0.0 || h.maxCoeff() < 1e-300) break;
    const long long N = static_cast<long long>(cells);
    auto at = [&](long long i, long long j) {
      Point x = box.lo;
      x(0) += static_cast<double>(i) * h(0);
      if (n == 2) x(1) += static_cast<double>(j) * h(1);
      return x;
    };
    for (int a = 0; a < n; ++a) {
      if (!(h(a) < 0.5)) continue;
      const long long outer = n == 2 ? N + 1 : 1;
      for (long long i = 0; i < (a == 0 ? N : outer); ++i)
        for (long long j = 0; j < (a == 0 ? outer : N); ++j) {
          const Point x = at(i, n == 2 ? j : 0);
          const Point y = a == 0 ? at(i + 1, n == 2 ? j : 0) : at(i, j + 1);
          if (!pair(x, y)) return rep;
        }
    }
  }
  return rep;
}

double QuadrupleSpec::rHarmonic() const {
  double inv = 0.0;
  for (double rj : r) inv += 1.0 / rj;
  return 1.0 / inv;
}

bool QuadrupleVerdict::admissible() const {
  return failures.empty() ||
         std::all_of(failures.begin(), failures.end(), [](const std::string& f) { return f.rfind("proper", 0) == 0; });
}

QuadrupleVerdict validateQuadruple(const QuadrupleSpec& spec, double tol, ProperOptions proper) {
  QuadrupleVerdict v;
  const int m = spec.arity();
  if (m < 1) {
    v.failures.push_back("arity: no exponents p_j");
    return v;
  }
  if (static_cast<int>(spec.r.size()) != m) {
    v.failures.push_back("arity: r has " + std::to_string(spec.r.size()) + " entries, p has " + std::to_string(m));
    return v;
  }
  for (const auto& pj : spec.p)
    if (!pj.domain().sameAs(spec.q.domain())) {
      v.failures.push_back("domain: exponents live on different boxes");
      return v;
    }
  if (!(spec.gamma >= 0.0)) v.failures.push_back("gamma: must be nonnegative");
  if (!(spec.s > 0.0)) v.failures.push_back("s: must be positive");

  for (int j = 0; j < m; ++j) {
    const double rj = spec.r[static_cast<std::size_t>(j)];
    const bool ok = rj > 0.0 && rj < spec.p[static_cast<std::size_t>(j)].pMinus();
    v.rClauses.push_back(ok);
    if (!ok) {
      std::ostringstream os;
      os << "r_" << j + 1 << " < (p_" << j + 1 << ")-: " << rj << " vs " << spec.p[static_cast<std::size_t>(j)].pMinus();
      v.failures.push_back(os.str());
    }
  }
  v.sClause = spec.q.pPlus() < spec.s;
  if (!v.sClause) {
    std::ostringstream os;
    os << "q+ < s: " << spec.q.pPlus() << " vs " << spec.s;
    v.failures.push_back(os.str());
  }

  int res = spec.q.resolution();
  for (const auto& pj : spec.p) res = std::max(res, pj.resolution());
  const Grid g = Grid::square(spec.q.domain(), res);
  Eigen::ArrayXd dev = -spec.q.sample(g).inverse() - spec.gamma;
  for (const auto& pj : spec.p) dev += pj.sample(g).inverse();
  v.gammaDeviation = dev.abs().maxCoeff();
  v.gammaClause = v.gammaDeviation <= tol;
  if (!v.gammaClause) {
    std::ostringstream os;
    os << "1/p - 1/q = gamma: max deviation " << v.gammaDeviation;
    v.failures.push_back(os.str());
  }

  v.proper = true;
  auto check = [&](const ExponentField& e, const std::string& name) {
    const LogHolderReport r = logHolderEstimate(e, proper.budget);
    v.logHolder.push_back(r);
    if (r.c0Estimate > proper.threshold || r.cInfEstimate > proper.threshold) {
      v.proper = false;
      std::ostringstream os;
      os << "proper: " << name << " log-Holder estimates (" << r.c0Estimate << ", " << r.cInfEstimate
         << ") exceed " << proper.threshold;
      v.failures.push_back(os.str());
    }
  };
  for (int j = 0; j < m; ++j) check(spec.p[static_cast<std::size_t>(j)], "p_" + std::to_string(j + 1));
  check(spec.q, "q");
  return v;
}

}  // namespace varleb
