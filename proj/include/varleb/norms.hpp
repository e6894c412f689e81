#pragma once

#include "varleb/exponent.hpp"
#include "varleb/field.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace varleb {

struct NormResult {
  double value = 0.0;  // may be +inf
  int iterations = 0;
  double bracketLo = 0.0;
  double bracketHi = 0.0;
  double modularAtValue = 0.0;
};

inline constexpr double kDefaultRelTol = 1e-10;

/// sum_k quad_k * mag_k^exps_k.
double modularOf(const Eigen::ArrayXd& mag, const Eigen::ArrayXd& exps, const Eigen::ArrayXd& quad);

/// Luxemburg norm of node magnitudes under node exponents and quadrature weights.
/// Constant exponent arrays use the closed form; otherwise bracket + geometric bisection
/// from lambda0 = max(1e-300, max(mag) * sum(quad)). Returns the upper bracket end, so
/// the modular at the value is <= 1.
NormResult luxemburgOf(const Eigen::ArrayXd& mag, const Eigen::ArrayXd& exps, const Eigen::ArrayXd& quad,
                       double relTol = kDefaultRelTol);

template <typename S>
double modular(const BasicGridFunction<S>& f, const ExponentField& p) {
  return modularOf(f.magnitude(), p.sample(f.grid()), f.grid().weights());
}

template <typename S>
NormResult luxemburgNorm(const BasicGridFunction<S>& f, const ExponentField& p, double relTol = kDefaultRelTol) {
  return luxemburgOf(f.magnitude(), p.sample(f.grid()), f.grid().weights(), relTol);
}

/// ||f w||_{p(.)}
template <typename S>
NormResult weightedNorm(const BasicGridFunction<S>& f, const ExponentField& p, const WeightField& w,
                        double relTol = kDefaultRelTol) {
  detail::requireSameGrid(f.grid(), w.grid(), "weightedNorm");
  return luxemburgOf(f.magnitude() * w.values(), p.sample(f.grid()), f.grid().weights(), relTol);
}

/// ||f w chi_region||_{p(.)}; empty regions give 0.
NormResult restrictedNorm(const Eigen::ArrayXd& mag, const Eigen::ArrayXd& exps, const Grid& grid,
                          const Region& region, double relTol = kDefaultRelTol, bool complement = false);

/// || ||F(x, .)||_{L^qTilde(dy)} ||_{L^p(.)(v) dx} for F given as rows (one per x-node of xGrid)
/// with y-quadrature weights.
NormResult mixedNormRows(const Eigen::ArrayXXd& rows, const Eigen::ArrayXd& yWeights, const Grid& xGrid,
                         const ExponentField& p, double qTilde, const WeightField* outerWeight = nullptr,
                         double relTol = kDefaultRelTol);

/// Mixed norm of a function on a 2D grid whose axis 0 is x (where p lives) and axis 1 is y.
NormResult mixedNorm(const GridFunction& f, const ExponentField& p, double qTilde,
                     const WeightField* outerWeight = nullptr, double relTol = kDefaultRelTol);

/// max over unit-ball test functions g (||g||_{p'} <= 1) of integral |f g|. The norming
/// function (|f|/||f||)^(p-1) is always tried first, then `trials` random simple functions.
double dualityPairingLowerBound(const GridFunction& f, const ExponentField& p, int trials, std::uint64_t seed);

/// 1/p- - 1/p+ + 1: integral |fg| <= C ||f||_p ||g||_{p'}.
double holderConstant(const ExponentField& p);
/// K with ||fg||_p <= K ||f||_{p1} ||g||_{p2} where 1/p = 1/p1 + 1/p2 (p is derived):
/// K = (sup p/p1 + sup p/p2)^(1/p-). Equals 1 for constant exponents and holderConstant(p1)
/// when p == 1.
double pairHolderConstant(const ExponentField& p1, const ExponentField& p2);
/// Product of pairwise constants along the chain f1 * (f2 * (... * fm)).
double productHolderConstant(std::span<const ExponentField> factors);
/// max(2^(1/p-), 2^(p+/p-)).
double quasiTriangleConstant(const ExponentField& p);

}  // namespace varleb
