#pragma once

#include "schema.hpp"

#include "varleb/exponent.hpp"
#include "varleb/field.hpp"
#include "varleb/rk.hpp"

#include <string>

namespace varleb::cli {

/// [lo, hi] or [[lo0, hi0], [lo1, hi1]].
Box parseDomain(const json& v, const std::string& pointer);

/// Function descriptor: a number (constant) or {"kind", "params"} with kind one of constant,
/// gaussian, indicator, power, bump, sine, translate, dilate, sum, product, grid_csv.
PointFunction parseFunction(const json& v, const std::string& pointer, json* echo, int dim);

/// Exponent descriptor: a number (constant) or {"kind", "params", "p_infinity"} with kind one
/// of constant, affine, log_decay, piecewise, grid.
ExponentField parseExponent(const json& v, const std::string& pointer, json* echo, const Box& domain);

/// Function descriptor sampled on the grid and checked for positivity.
WeightField parseWeight(const json& v, const std::string& pointer, json* echo, const Grid& grid);

/// {"p": [..], "q", "r": [..], "s": number | "inf", "gamma"}.
QuadrupleSpec parseSpec(const json& v, const std::string& pointer, json* echo, const Box& domain);

/// {"base": function, "generator": {"kind", "count", "step"}, "label"}.
FunctionFamily parseFamily(const json& v, const std::string& pointer, json* echo, const Grid& grid);

/// Header "x,value" or "x,y,value"; rows in grid order (axis 0 slowest).
GridFunction readCsv(const std::string& path);
void writeCsv(const GridFunction& f, const std::string& path);

}  // namespace varleb::cli
