#pragma once

#include "varleb/geometry.hpp"
#include "varleb/grid.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace varleb {

namespace detail {
struct ExponentNode;
}

/// A variable exponent p(.) on a box, with 0 < p- <= p+ < inf.
///
/// Fields are closed-form evaluators built from a small set of kinds and combined through
/// reciprocal-affine maps 1/p = c0 + sum_k c_k / p_k, which covers duals, harmonic sums,
/// theta-blends, their inverses and constant rescalings. p- and p+ are exact where the
/// kind allows it and otherwise come from a scan at the field's declared resolution.
class ExponentField {
 public:
  static constexpr int kDefaultResolution1d = 1025;
  static constexpr int kDefaultResolution2d = 129;

  static ExponentField constant(const Box& domain, double value);
  /// p(x) = offset + gradient . x
  static ExponentField affine(const Box& domain, double offset, const Point& gradient);
  /// p(x) = base + amplitude / log(e + |x - center|); p_infinity = base.
  static ExponentField logDecay(const Box& domain, double base, double amplitude, const Point& center);
  /// Piecewise constant along `axis`: values[i] where i = #{breaks b : x_axis > b}.
  static ExponentField piecewise(const Box& domain, std::vector<double> breaks, std::vector<double> values,
                                 int axis = 0);
  /// Multilinear interpolation of node values on `grid`.
  static ExponentField sampled(const Grid& grid, Eigen::ArrayXd values);
  /// 1/p = c0 + sum_k c_k / p_k. Constant terms are folded into c0.
  /// Throws RangeError naming a point where the right-hand side is not positive.
  static ExponentField reciprocalAffine(double c0, const std::vector<std::pair<double, ExponentField>>& terms);

  double operator()(const Point& x) const;
  Eigen::ArrayXd sample(const Grid& grid) const;

  const Box& domain() const { return domain_; }
  int resolution() const { return resolution_; }
  /// Grid at the declared resolution over the domain.
  Grid scanGrid() const;

  double pMinus() const { return pMinus_; }
  double pPlus() const { return pPlus_; }
  const std::optional<double>& pInfinity() const { return pInfinity_; }
  std::optional<double> constantValue() const;
  bool isConstant() const { return constantValue().has_value(); }
  /// Membership in the class with p- > 1.
  bool isBanach() const { return pMinus_ > 1.0; }

  ExponentField withResolution(int resolution) const;
  ExponentField withPInfinity(double pInf) const;
  std::string describe() const;

 private:
  ExponentField(std::shared_ptr<const detail::ExponentNode> node, Box domain, int resolution);
  void computeExtremes();

  std::shared_ptr<const detail::ExponentNode> node_;
  Box domain_;
  int resolution_;
  double pMinus_ = 0.0;
  double pPlus_ = 0.0;
  std::optional<double> pInfinity_;

  friend struct detail::ExponentNode;
};

/// p' with 1/p + 1/p' = 1. Throws DomainError unless p- > 1.
ExponentField dualExponent(const ExponentField& p);
/// 1/p = sum_j 1/p_j. Throws DomainError on mismatched domains.
ExponentField harmonicCombine(std::span<const ExponentField> ps);
/// 1/p = (1-theta)/p0 + theta/p1, theta in (0,1).
ExponentField thetaBlend(const ExponentField& p0, const ExponentField& p1, double theta);
/// p0 with thetaBlend(p0, p1, theta) = p; RangeError where 1/p - theta/p1 <= 0.
ExponentField thetaInvert(const ExponentField& p, const ExponentField& p1, double theta);
/// s * p(.) for a constant s > 0.
ExponentField scaleExponent(const ExponentField& p, double s);
/// 1/(1/p - shift); used for exponents such as 1/(1/q - 1/s).
ExponentField reciprocalShift(const ExponentField& p, double shift);
/// 1/(1/r - 1/p) for a constant r; used for the weight-dual exponents of admissible quadruples.
ExponentField reciprocalComplement(double r, const ExponentField& p);

/// Lower bounds for the log-Holder constants of an exponent.
struct LogHolderReport {
  double c0Estimate = 0.0;
  double cInfEstimate = 0.0;
  double pInfinity = 0.0;
  std::size_t samplePairs = 0;

  double cLog() const { return std::max(c0Estimate, cInfEstimate); }
};

/// Evaluates |p(x)-p(y)| * (-log|x-y|) over a deterministic nested sequence of neighbour
/// pairs (|x-y| < 1/2, halving spacing level by level) and |p(x)-p_inf| * log(e+|x|) over
/// the sampled points. The first `budget` pairs of the sequence are used, so estimates
/// are nondecreasing in the budget.
LogHolderReport logHolderEstimate(const ExponentField& p, std::size_t budget);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// An m-admissible quadruple candidate (p_1..p_m, q, r_1..r_m, s) with offset gamma.
struct QuadrupleSpec {
  std::vector<ExponentField> p;
  ExponentField q;
  std::vector<double> r;
  double s = kInfinity;
  double gamma = 0.0;

  int arity() const { return static_cast<int>(p.size()); }
  double invS() const { return std::isinf(s) ? 0.0 : 1.0 / s; }
  /// r with 1/r = sum_j 1/r_j.
  double rHarmonic() const;
  /// p with 1/p = sum_j 1/p_j.
  ExponentField pHarmonic() const { return harmonicCombine(p); }
};

struct QuadrupleVerdict {
  std::vector<bool> rClauses;  // r_j < (p_j)-
  bool sClause = false;        // q+ < s
  bool gammaClause = false;    // |1/p - 1/q - gamma| <= tol on the validation grid
  double gammaDeviation = 0.0;
  bool proper = false;
  std::vector<LogHolderReport> logHolder;  // p_1..p_m, then q
  std::vector<std::string> failures;

  bool admissible() const;
};

struct ProperOptions {
  std::size_t budget = 100000;
  double threshold = 10.0;
};

QuadrupleVerdict validateQuadruple(const QuadrupleSpec& spec, double tol = 1e-9, ProperOptions proper = {});

}  // namespace varleb
