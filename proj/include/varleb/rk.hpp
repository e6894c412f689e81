#pragma once

#include "varleb/exponent.hpp"
#include "varleb/field.hpp"
#include "varleb/norms.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace varleb {

using PointFunction = std::function<double(const Point&)>;

/// A finite family of functions on one grid.
struct FunctionFamily {
  std::string label;
  std::vector<GridFunction> members;

  const Grid& grid() const;
  std::size_t size() const { return members.size(); }
  /// Throws DomainError if empty or if members live on different grids.
  void validate() const;
};

/// f(x - k step e_0), k = 0..count-1.
FunctionFamily translateFamily(const Grid& grid, const PointFunction& base, int count, double step);
/// f(c + (x - c) / (1 + k step)) about the box center c.
FunctionFamily dilateFamily(const Grid& grid, const PointFunction& base, int count, double step);
/// f(x) sin(2^(k step) x_0).
FunctionFamily modulateFamily(const Grid& grid, const PointFunction& base, int count, double step);
/// f convolved with a tensor bump of radius step 2^-k (f extended by zero outside the box).
FunctionFamily mollifyFamily(const Grid& grid, const PointFunction& base, int count, double step);

enum class ProfileVerdict { Pass, Fail, Inconclusive };
const char* verdictName(ProfileVerdict v);

/// A parameter sweep with the supremum over the family at each parameter value.
struct ConditionProfile {
  std::string condition;
  std::vector<double> parameter;
  std::vector<double> supValues;
  std::vector<std::size_t> argmax;  // member attaining each supremum
  double threshold = 0.0;
  ProfileVerdict verdict = ProfileVerdict::Inconclusive;
};

/// sup_f ||f||_{L^p(w)}; passes iff finite.
ConditionProfile uniformBoundProfile(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                     double relTol = kDefaultRelTol);

/// r -> sup_f || oscillationAverage(f, r, qTilde) ||_{L^p(w)}; passes iff the value at the
/// smallest radius is at most `threshold`.
ConditionProfile equicontinuityProfile(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                       double qTilde, const std::vector<double>& radii, double threshold,
                                       double relTol = kDefaultRelTol);

/// R -> sup_f || f chi_{outside B(x0, R)} ||_{L^p(w)} over increasing R; passes iff the last
/// value is at most `threshold`. Reported values are made nonincreasing by a running minimum,
/// which only removes bisection noise since the tails are nested.
ConditionProfile vanishingProfile(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                  const Point& x0, const std::vector<double>& tailRadii, double threshold,
                                  double relTol = kDefaultRelTol);

/// Set index -> sup_f || f chi_E ||_{L^p(w)}; passes iff the last value is at most `threshold`.
ConditionProfile equiIntegrabilityMeasure(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                          const std::vector<Region>& shrinkingSets, double threshold,
                                          double relTol = kDefaultRelTol);

/// Nested boxes around `center`, slab k of width 2^-k times the box side along axis 0 (full
/// extent along the other axis), k = 1..levels.
std::vector<Region> thinSlabs(const Box& box, const Point& center, int levels);

/// Pairwise distances ||f_i - f_j||_{L^p(w)}.
Eigen::MatrixXd familyDistances(const FunctionFamily& fam, const ExponentField& p, const WeightField& w,
                                double relTol = kDefaultRelTol);

struct EpsNet {
  std::vector<std::size_t> centers;     // member indices, in selection order
  std::vector<std::size_t> assignment;  // nearest center (index into centers) per member
  double coveringRadius = 0.0;
};

/// Greedy farthest-point net: start from member 0, add the member farthest from the
/// current centers until every member is within eps. Net size is nonincreasing in eps.
EpsNet epsNetFromDistances(const Eigen::MatrixXd& d, double eps);
EpsNet epsNetOracle(const FunctionFamily& fam, const ExponentField& p, const WeightField& w, double eps,
                    double relTol = kDefaultRelTol);

struct ClassifyConfig {
  std::optional<Point> x0;         // default: box center
  std::vector<double> radii;       // default: 8 radii from 2h, ratio 1.4
  std::vector<double> tailRadii;   // default: 16 radii up to 15/16 of the inscribed radius
  int epsLevels = 9;               // eps = 2^-k diam, k = 0..epsLevels-1
  int plateauLength = 3;
  double thresholdFactor = 1e-2;   // thresholds = factor * uniform bound
  int cubeDepth = 4;               // for the weight hypothesis check
  double relTol = kDefaultRelTol;
};

struct RkVerdict {
  ConditionProfile boundedness, equicontinuity, vanishing;
  double hypothesisConstant = 0.0;
  double diameter = 0.0;
  std::vector<double> eps;
  std::vector<std::size_t> netSizes;
  bool plateau = false;
  bool grows = false;
  std::vector<std::string> failingClauses;  // "uniform-bound", "equicontinuity", "vanishing"
  std::string verdict;                      // consistent-compact | consistent-noncompact | inconclusive
};

/// Runs the three profiles and the eps-net oracle. Checks first that
/// [w^qTilde]_{A_{p/qTilde}} is finite on dyadic cubes (HypothesisFailure otherwise).
RkVerdict classify(const FunctionFamily& fam, const ExponentField& p, const WeightField& w, double qTilde,
                   const ClassifyConfig& config = {});

/// A ready-made diagnostic setup: family, exponent, weight and inner exponent.
struct RkCase {
  FunctionFamily family;
  ExponentField p;
  WeightField w;
  double qTilde;
};

/// "mollifier" (dilates of a smooth bump), "translate" (unit-interval indicators marching
/// along [0,10]) or "oscillation" (sin(kx) on [0,1], k = 1..64). `doubled` halves the
/// generator step and doubles the family size.
RkCase canonicalRkCase(const std::string& name, bool doubled = false);

}  // namespace varleb
