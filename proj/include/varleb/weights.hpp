#pragma once

#include "varleb/cubes.hpp"
#include "varleb/exponent.hpp"
#include "varleb/field.hpp"
#include "varleb/norms.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace varleb {

/// Per-cube norms above this count as divergent.
inline constexpr double kOverflowThreshold = 1e150;

struct WeightConstantReport {
  double constant = 0.0;  // +inf when `overflow`
  bool overflow = false;
  CubeId argmaxCube;
  std::vector<double> perCube;  // enumeration order of the cube set
  std::string cubeSet;
  std::string convention;

  bool finite() const { return !overflow; }
};

struct CubeScanOptions {
  double relTol = kDefaultRelTol;
  bool keepPerCube = true;
};

/// One factor ||mag chi_Q||_{exps} of a cube functional.
struct CubeFactor {
  Eigen::ArrayXd mag;
  Eigen::ArrayXd exps;
};

/// sup over the cube set of |Q|^measurePower * prod_k ||factor_k chi_Q||, with |Q| the
/// quadrature measure of Q on the grid. Generic engine behind every weight constant.
WeightConstantReport cubeSupremum(const Grid& grid, const DyadicCubeSet& cubes, double measurePower,
                                  std::span<const CubeFactor> factors, const CubeScanOptions& opt,
                                  std::string convention);

/// sup_Q |Q|^-1 ||w chi_Q||_{p(.)} ||w^-1 chi_Q||_{p'(.)}; requires p- > 1.
WeightConstantReport apConstant(const WeightField& w, const ExponentField& p, const DyadicCubeSet& cubes,
                                const CubeScanOptions& opt = {});

/// u = w^{p(.)}: the weight of the non-symmetric convention.
WeightField toNonSymmetric(const WeightField& w, const ExponentField& p);
/// sup_Q (avg_Q u)(avg_Q u^{1-p'})^{p-1} for a constant exponent p > 1. Equals the p-th
/// power of apConstant(u^{1/p}, p) cube by cube.
WeightConstantReport classicalApConstant(const WeightField& u, double p, const DyadicCubeSet& cubes);

/// The multilinear constant
///   sup_Q |Q|^{gamma-(1/r-1/s)} ||nu chi_Q||_{1/(1/q-1/s)} prod_j ||w_j^-1 chi_Q||_{1/(1/r_j-1/p_j)}
/// with nu = prod_j w_j. Throws ArityMismatch, RangeError for nonpositive derived exponents.
WeightConstantReport multilinearConstant(std::span<const WeightField> ws, const QuadrupleSpec& spec,
                                         const DyadicCubeSet& cubes, const CubeScanOptions& opt = {});

struct TwoToOneReport {
  double lhs = 0.0;  // multilinear constant, m = 1
  double rhs = 0.0;  // [w^a]_{t}^{1/a}
  double relError = 0.0;
  double maxCubeRelError = 0.0;
  double a = 0.0;
  double tMinus = 0.0;
  double tPlus = 0.0;
  WeightConstantReport lhsReport, rhsReport;
};

/// Both sides of the identity between the (p,q),(r,s) constant of w and the A_t constant of
/// w^a, a = 1/(1/r - 1/s - gamma), t = (1/r - 1/s - gamma)/(1/q - 1/s), over one cube set.
TwoToOneReport twoToOneCheck(const WeightField& w, const QuadrupleSpec& spec, const DyadicCubeSet& cubes,
                             const CubeScanOptions& opt = {});

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;      // bound before the constant
  double constant = 1.0; // C in lhs <= C * rhs
  double slack = 1e-9;   // relative
  double ratio = 0.0;    // lhs / rhs
  bool holds = false;
  std::vector<std::string> notes;
};

/// [w]_{(r, inf)} <= K [w]_{(r, s)} with K the pair Holder constant of (s, 1/(1/q - 1/s)).
InequalityReport containmentCheck(std::span<const WeightField> ws, const QuadrupleSpec& spec,
                                  const DyadicCubeSet& cubes, const CubeScanOptions& opt = {});

struct BlendReport {
  InequalityReport inequality;
  QuadrupleSpec blendedSpec;
  std::vector<WeightField> blendedWeights;
  double constant0 = 0.0;
  double constant1 = 0.0;
};

/// [w]_{blend} <= C [w0]^{1-theta} [w1]^theta with C the product of the pair Holder constants
/// of the m+1 factor splittings (1 for constant exponents). SpecMismatch unless both
/// endpoints share gamma, r and s.
BlendReport blendConstantCheck(std::span<const WeightField> w0, std::span<const WeightField> w1,
                               const QuadrupleSpec& spec0, const QuadrupleSpec& spec1, double theta,
                               const DyadicCubeSet& cubes, const CubeScanOptions& opt = {});

struct ComponentwiseReport {
  std::vector<double> inverseSigma;
  std::vector<WeightConstantReport> components;  // w_j in A_{p_j,(r_j,sigma_j)}
  WeightConstantReport nu;                        // nu in A_{(p,q),(r,s)}
  WeightConstantReport aggregate;                 // multilinear constant
  bool componentsFinite = false;
  bool aggregateFinite = false;
  bool consistent() const { return componentsFinite == aggregateFinite; }
};

/// Throws RangeError if some 1/sigma_j = 1/r_j - (1/r - 1/s) is not positive.
ComponentwiseReport componentwiseCharacterize(std::span<const WeightField> ws, const QuadrupleSpec& spec,
                                              const DyadicCubeSet& cubes, const CubeScanOptions& opt = {});

}  // namespace varleb
