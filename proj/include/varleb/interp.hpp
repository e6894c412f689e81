#pragma once

#include "varleb/exponent.hpp"
#include "varleb/field.hpp"
#include "varleb/norms.hpp"
#include "varleb/rk.hpp"
#include "varleb/simple_function.hpp"
#include "varleb/weights.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace varleb {

enum class OperatorKind { PointwiseProduct, FractionalKernel, BallAverageProduct };

/// "pointwise_product", "fractional_kernel", "ball_average_product".
const char* operatorName(OperatorKind k);
OperatorKind parseOperatorKind(const std::string& name);

struct OperatorSpec {
  OperatorKind kind = OperatorKind::PointwiseProduct;
  int arity = 1;
  double alpha = 0.0;   // fractional kernel
  double radius = 0.0;  // ball averages

  /// Throws DomainError on arity < 1, alpha outside (0, m) or a nonpositive radius.
  void validate() const;
};

/// m-linear demo operators on a shared grid:
///   product           prod_j f_j(x)
///   fractional (1D)   sum over nodes y of (sum_j |x - y_j|)^-(m - alpha) prod_j f_j(y_j) dy,
///                     skipping the singular cell y_1 = .. = y_m = x; m <= 2
///   ball averages     prod_j avg_{B(x, radius)} f_j
/// Throws ArityMismatch if fs.size() != arity.
GridFunction applyOperator(const OperatorSpec& op, std::span<const GridFunction> fs);

/// Exponents, weights and operator constant at one end of the scale. The target weight v
/// defaults to the product of the w_j.
struct Endpoint {
  std::vector<ExponentField> p;
  ExponentField q;
  std::vector<WeightField> w;
  std::optional<WeightField> v;
  double M = 0.0;

  WeightField target() const;
};

struct InterpolationExperiment {
  OperatorSpec op;
  Endpoint endpoint0, endpoint1;
  double theta = 0.5;
  int trials = 1000;
  std::uint64_t seed = 1;
  double safety = 1.05;  // certified M_i = max(M_i, safety * observed max)
  double slack = 1e-6;   // violation iff ratio > bound * (1 + slack)
  double relTol = 1e-9;
  SimpleFunctionOptions simple;
  std::optional<double> qTilde;  // mixed runs only
  double yRadius = 0.1;          // mixed runs: y ranges over grid offsets with |y| < yRadius
};

/// The blended end of an experiment.
struct BlendedEndpoint {
  std::vector<ExponentField> p;
  ExponentField q;
  std::vector<WeightField> w;
  WeightField v;
};
BlendedEndpoint blendEndpoints(const Endpoint& e0, const Endpoint& e1, double theta);

struct InterpolationReport {
  double observedM0 = 0.0, observedM1 = 0.0;
  double certifiedM0 = 0.0, certifiedM1 = 0.0;
  bool inflated0 = false, inflated1 = false;
  double bound = 0.0;  // certifiedM0^(1-theta) certifiedM1^theta
  double worstRatio = 0.0;
  std::size_t worstTrial = 0;
  int violations = 0;
  int trials = 0;
  std::vector<double> ratios;  // blended ratios per trial (NaN when an input norm is 0)
  std::vector<SimpleFunction> minimizedViolation;  // empty unless a violation occurred
  double minimizedRatio = 0.0;

  bool holds() const { return violations == 0; }
};

/// Certifies M_0, M_1 on random simple-function m-tuples, then checks
/// ||T f||_{L^q(v)} <= M_0^(1-theta) M_1^theta prod_j ||f_j||_{L^{p_j}(w_j)} on the same tuples.
/// The grid is taken from the endpoint-0 weights.
InterpolationReport verifyInterpolationBound(const InterpolationExperiment& exp);

/// Mixed-norm variant with S(f)(x, y) = T(f)(x) - T(f)(x + y) (T extended by zero) and the
/// inner L^qTilde norm over grid offsets |y| < yRadius. 1D only.
InterpolationReport verifyMixedInterpolationBound(const InterpolationExperiment& exp);

/// S(f)(x, y) rows for the mixed norm, and the y-quadrature weights.
std::pair<Eigen::ArrayXXd, Eigen::ArrayXd> differenceRows(const GridFunction& t, double yRadius);

struct ExtrapolationEndpoint {
  QuadrupleSpec spec;
  std::vector<WeightField> w;
};

struct ExtrapolationFamilyReport {
  ExtrapolationEndpoint endpoint0;
  QuadrupleVerdict verdict0;
  WeightConstantReport constant0;
  std::optional<WeightConstantReport> tConstant0;  // w0^t against (p0/t, q0/t)
  bool tClause = true;                               // t < min (p0_j)-
  double roundTripError = 0.0;                       // blend(endpoint0, endpoint1) vs target

  bool finite() const { return constant0.finite() && (!tConstant0 || tConstant0->finite()); }
};

/// Solves the theta-blend for endpoint 0: 1/p_j = (1-theta)/p0_j + theta/p1_j (same for q),
/// w_j = w0_j^(1-theta) w1_j^theta. r, s and gamma are taken from the target. Throws
/// RangeError where 1/p_j - theta/p1_j <= 0.
ExtrapolationFamilyReport buildExtrapolationFamily(const QuadrupleSpec& target, const QuadrupleSpec& known1,
                                                   std::span<const WeightField> w, std::span<const WeightField> w1,
                                                   double theta, const DyadicCubeSet& cubes,
                                                   std::optional<double> t = std::nullopt);

/// Endpoint 1 of the workflow: its quadruple, weights and operator inputs whose outputs form
/// a compact family there.
struct CompactEndpoint {
  QuadrupleSpec spec;
  std::vector<WeightField> w;
  std::vector<std::vector<GridFunction>> inputs;
};

struct WorkflowConfig {
  int trials = 200;
  std::uint64_t seed = 1;
  double qTilde = 0.25;
  int cubeDepth = 4;
  ClassifyConfig classify;
  SimpleFunctionOptions simple;
  double relTol = 1e-9;
};

struct WorkflowEntry {
  double theta = 0.0;
  bool built = false;
  std::string error;  // RangeError text when endpoint 0 does not exist
  std::optional<ExtrapolationFamilyReport> family;
  double observedM0 = 0.0;  // max ratio at endpoint 0 over the trials
  bool bounded = false;
  std::optional<RkVerdict> verdict;
};

struct WorkflowReport {
  RkVerdict endpoint1Verdict;
  std::vector<WorkflowEntry> entries;
};

/// For each theta: build endpoint 0, certify boundedness there on random simple functions,
/// and classify the operator outputs in the target space L^q(prod w_j).
/// Throws HypothesisFailure if the outputs are not consistent-compact at endpoint 1.
WorkflowReport runExtrapolationWorkflow(const std::vector<double>& thetaLadder, const QuadrupleSpec& target,
                                        std::span<const WeightField> w, const CompactEndpoint& compact,
                                        const OperatorSpec& op, const WorkflowConfig& config = {});

}  // namespace varleb
