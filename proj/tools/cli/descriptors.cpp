#include "descriptors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

namespace varleb::cli {

namespace {

Point toPoint(const std::vector<double>& v, int dim, const std::string& pointer) {
  if (v.size() == 1) return Point::Constant(dim, v.front());
  if (static_cast<int>(v.size()) != dim)
    throw SchemaError(pointer, "expected " + std::to_string(dim) + " coordinates");
  return Eigen::Map<const Point>(v.data(), dim);
}

Point pointParam(Object& o, const std::string& key, int dim, double def) {
  if (auto v = o.numbers(key, std::nullopt)) return toPoint(*v, dim, o.path(key));
  o.number(key, def);  // records the default in the echo
  return Point::Constant(dim, def);
}

json* elementEcho(json* arr, std::size_t i) { return arr && arr->is_array() && i < arr->size() ? &(*arr)[i] : nullptr; }

std::vector<PointFunction> parseFunctions(Object& o, const std::string& key, int dim) {
  const json& arr = o.at(key);
  if (!arr.is_array() || arr.empty()) throw SchemaError(o.path(key), "expected a nonempty array");
  std::vector<PointFunction> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parseFunction(arr[i], o.path(key) + "/" + std::to_string(i), elementEcho(o.echoOf(key), i), dim));
  return out;
}

PointFunction gridFunctionEvaluator(const GridFunction& f) {
  auto g = std::make_shared<GridFunction>(f);
  return [g](const Point& x) {
    const Box& b = g->grid().box();
    if (x.size() != b.dim() || !b.contains(x)) return 0.0;
    return g->grid().interpolate(g->values(), x);
  };
}

}  // namespace

Box parseDomain(const json& v, const std::string& pointer) {
  if (!v.is_array() || v.empty()) throw SchemaError(pointer, "expected [lo, hi] or [[lo, hi], [lo, hi]]");
  if (v[0].is_number()) {
    const auto b = asNumbers(v, pointer);
    if (b.size() != 2 || !(b[0] < b[1])) throw SchemaError(pointer, "expected [lo, hi] with lo < hi");
    return Box::interval(b[0], b[1]);
  }
  if (v.size() != 2) throw SchemaError(pointer, "only 1D and 2D domains are supported");
  const auto x = asNumbers(v[0], pointer + "/0"), y = asNumbers(v[1], pointer + "/1");
  if (x.size() != 2 || y.size() != 2 || !(x[0] < x[1]) || !(y[0] < y[1]))
    throw SchemaError(pointer, "expected [[lo, hi], [lo, hi]] with lo < hi");
  return Box::rectangle(x[0], x[1], y[0], y[1]);
}

PointFunction parseFunction(const json& v, const std::string& pointer, json* echo, int dim) {
  if (v.is_number()) {
    const double c = v.get<double>();
    return [c](const Point&) { return c; };
  }
  Object o(v, pointer, echo);
  const std::string kind = o.string("kind");
  Object p = o.optionalChild("params");
  PointFunction f;
  if (kind == "constant") {
    const double c = p.number("value");
    f = [c](const Point&) { return c; };
  } else if (kind == "gaussian") {
    const Point c = pointParam(p, "center", dim, 0.0);
    const double s = p.number("scale", 1.0), a = p.number("amplitude", 1.0);
    if (!(s > 0.0)) throw SchemaError(p.path("scale"), "must be positive");
    f = [c, s, a](const Point& x) { return a * std::exp(-(x - c).squaredNorm() / (s * s)); };
  } else if (kind == "indicator") {
    const Point lo = toPoint(p.numbers("lo"), dim, p.path("lo")), hi = toPoint(p.numbers("hi"), dim, p.path("hi"));
    const double a = p.number("amplitude", 1.0);
    const Box b{lo, hi};
    f = [b, a](const Point& x) { return b.contains(x) ? a : 0.0; };
  } else if (kind == "power") {
    const double e = p.number("exponent");
    const Point c = pointParam(p, "center", dim, 0.0);
    const double eps = p.number("epsilon", 0.0), a = p.number("amplitude", 1.0);
    f = [e, c, eps, a](const Point& x) { return a * std::pow((x - c).norm() + eps, e); };
  } else if (kind == "bump") {
    const Point c = pointParam(p, "center", dim, 0.0);
    const double r = p.number("radius", 1.0), a = p.number("amplitude", 1.0);
    if (!(r > 0.0)) throw SchemaError(p.path("radius"), "must be positive");
    f = [c, r, a](const Point& x) {
      const double t = (x - c).norm() / r;
      return t < 1.0 ? a * std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
    };
  } else if (kind == "sine") {
    const double k = p.number("frequency"), ph = p.number("phase", 0.0), a = p.number("amplitude", 1.0);
    const int axis = p.integer("axis", 0);
    if (axis < 0 || axis >= dim) throw SchemaError(p.path("axis"), "axis out of range");
    f = [k, ph, a, axis](const Point& x) { return a * std::sin(k * x(axis) + ph); };
  } else if (kind == "translate") {
    const PointFunction base = parseFunction(p.at("base"), p.path("base"), p.echoOf("base"), dim);
    const Point s = toPoint(p.numbers("shift"), dim, p.path("shift"));
    f = [base, s](const Point& x) { return base(Point(x - s)); };
  } else if (kind == "dilate") {
    const PointFunction base = parseFunction(p.at("base"), p.path("base"), p.echoOf("base"), dim);
    const double d = p.number("factor");
    if (!(d > 0.0)) throw SchemaError(p.path("factor"), "must be positive");
    const Point c = pointParam(p, "center", dim, 0.0);
    f = [base, d, c](const Point& x) { return base(Point(c + (x - c) / d)); };
  } else if (kind == "sum" || kind == "product") {
    const auto parts = parseFunctions(p, kind == "sum" ? "terms" : "factors", dim);
    const bool sum = kind == "sum";
    f = [parts, sum](const Point& x) {
      double v = sum ? 0.0 : 1.0;
      for (const auto& g : parts) v = sum ? v + g(x) : v * g(x);
      return v;
    };
  } else if (kind == "grid_csv") {
    const std::string path = p.string("path");
    GridFunction g = [&] {
      try {
        return readCsv(path);
      } catch (const Error& e) {
        throw SchemaError(p.path("path"), e.what());
      }
    }();
    if (g.grid().dim() != dim) throw SchemaError(p.path("path"), "CSV dimension does not match the domain");
    f = gridFunctionEvaluator(g);
  } else {
    throw SchemaError(o.path("kind"), "unknown function kind '" + kind + "'");
  }
  p.finish();
  o.finish();
  return f;
}

ExponentField parseExponent(const json& v, const std::string& pointer, json* echo, const Box& domain) {
  const int dim = domain.dim();
  if (v.is_number()) {
    if (!(v.get<double>() > 0.0)) throw SchemaError(pointer, "exponent must be positive");
    return ExponentField::constant(domain, v.get<double>());
  }
  Object o(v, pointer, echo);
  const std::string kind = o.string("kind");
  Object p = o.optionalChild("params");
  auto build = [&]() -> ExponentField {
    if (kind == "constant") return ExponentField::constant(domain, p.number("value"));
    if (kind == "affine")
      return ExponentField::affine(domain, p.number("offset"), toPoint(p.numbers("gradient"), dim, p.path("gradient")));
    if (kind == "log_decay")
      return ExponentField::logDecay(domain, p.number("base"), p.number("amplitude"), pointParam(p, "center", dim, 0.0));
    if (kind == "piecewise") {
      const int axis = p.integer("axis", 0);
      return ExponentField::piecewise(domain, p.numbers("breaks"), p.numbers("values"), axis);
    }
    if (kind == "grid") {
      const auto values = p.numbers("values");
      std::vector<int> res;
      if (const json* r = p.find("resolution")) {
        for (double x : asNumbers(*r, p.path("resolution"))) res.push_back(static_cast<int>(x));
      } else if (dim == 1) {
        res = {static_cast<int>(values.size())};
      } else {
        throw SchemaError(p.path("resolution"), "required for 2D grid exponents");
      }
      if (res.size() == 1 && dim == 2) res.push_back(res.front());
      const Grid g(domain, res);
      if (g.size() != static_cast<Eigen::Index>(values.size()))
        throw SchemaError(p.path("values"), "value count does not match the resolution");
      return ExponentField::sampled(g, Eigen::Map<const Eigen::ArrayXd>(values.data(), g.size()));
    }
    throw SchemaError(o.path("kind"), "unknown exponent kind '" + kind + "'");
  };
  ExponentField e = [&] {
    try {
      return build();
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& err) {
      throw SchemaError(o.path("params"), err.what());
    }
  }();
  if (const json* pi = o.find("p_infinity")) e = e.withPInfinity(asNumber(*pi, o.path("p_infinity")));
  p.finish();
  o.finish();
  return e;
}

WeightField parseWeight(const json& v, const std::string& pointer, json* echo, const Grid& grid) {
  const PointFunction f = parseFunction(v, pointer, echo, grid.dim());
  try {
    return WeightField(GridFunction::sample(grid, f));
  } catch (const DomainError& e) {
    throw SchemaError(pointer, std::string("not a weight: ") + e.what());
  }
}

QuadrupleSpec parseSpec(const json& v, const std::string& pointer, json* echo, const Box& domain) {
  Object o(v, pointer, echo);
  const json& ps = o.at("p");
  if (!ps.is_array() || ps.empty()) throw SchemaError(o.path("p"), "expected a nonempty array of exponents");
  std::vector<ExponentField> p;
  for (std::size_t j = 0; j < ps.size(); ++j)
    p.push_back(parseExponent(ps[j], o.path("p") + "/" + std::to_string(j), elementEcho(o.echoOf("p"), j), domain));
  const ExponentField q = parseExponent(o.at("q"), o.path("q"), o.echoOf("q"), domain);
  const auto r = o.numbers("r");
  if (r.size() != p.size()) throw SchemaError(o.path("r"), "r must have one entry per p");
  for (double x : r)
    if (!(x > 0.0)) throw SchemaError(o.path("r"), "r_j must be positive");
  const double s = o.extended("s", kInfinity);
  const double gamma = o.number("gamma", 0.0);
  if (!(s > 0.0)) throw SchemaError(o.path("s"), "s must be positive");
  if (!(gamma >= 0.0)) throw SchemaError(o.path("gamma"), "gamma must be nonnegative");
  o.finish();
  return QuadrupleSpec{std::move(p), q, r, s, gamma};
}

FunctionFamily parseFamily(const json& v, const std::string& pointer, json* echo, const Grid& grid) {
  Object o(v, pointer, echo);
  const PointFunction base = parseFunction(o.at("base"), o.path("base"), o.echoOf("base"), grid.dim());
  Object g = o.child("generator");
  const std::string kind = g.string("kind");
  const int count = g.integer("count");
  const double step = g.number("step");
  if (count < 1) throw SchemaError(g.path("count"), "must be >= 1");
  FunctionFamily fam;
  if (kind == "translate") fam = translateFamily(grid, base, count, step);
  else if (kind == "dilate") fam = dilateFamily(grid, base, count, step);
  else if (kind == "modulate") fam = modulateFamily(grid, base, count, step);
  else if (kind == "mollify") fam = mollifyFamily(grid, base, count, step);
  else throw SchemaError(g.path("kind"), "unknown generator '" + kind + "'");
  fam.label = o.string("label", kind);
  g.finish();
  o.finish();
  return fam;
}

GridFunction readCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open CSV file '" + path + "'");
  std::string line;
  std::getline(in, line);
  int dim = 0;
  if (line.rfind("x,value", 0) == 0) dim = 1;
  else if (line.rfind("x,y,value", 0) == 0) dim = 2;
  else throw DomainError("CSV header must be 'x,value' or 'x,y,value'");
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::array<double, 3> r{};
    std::string cell;
    for (int k = 0; k <= dim; ++k) {
      if (!std::getline(ss, cell, ',')) throw DomainError("CSV row has too few columns: " + line);
      r[static_cast<std::size_t>(k)] = std::stod(cell);
    }
    rows.push_back(r);
  }
  if (rows.size() < 2) throw DomainError("CSV needs at least two rows");
  std::map<double, int> xs, ys;
  for (const auto& r : rows) {
    xs[r[0]];
    if (dim == 2) ys[r[1]];
  }
  std::vector<int> res{static_cast<int>(xs.size())};
  Box box = Box::interval(xs.begin()->first, xs.rbegin()->first);
  if (dim == 2) {
    res.push_back(static_cast<int>(ys.size()));
    box = Box::rectangle(xs.begin()->first, xs.rbegin()->first, ys.begin()->first, ys.rbegin()->first);
  }
  const Grid g(box, res);
  if (g.size() != static_cast<Eigen::Index>(rows.size())) throw DomainError("CSV rows do not form a full grid");
  Eigen::ArrayXd v(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Point x = g.node(k);
    const auto& r = rows[static_cast<std::size_t>(k)];
    const double tol = 1e-9 * (1.0 + box.diameter());
    if (std::abs(r[0] - x(0)) > tol || (dim == 2 && std::abs(r[1] - x(1)) > tol))
      throw DomainError("CSV rows are not a uniform grid in row-major order");
    v(k) = r[static_cast<std::size_t>(dim)];
  }
  return GridFunction(g, std::move(v));
}

void writeCsv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write CSV file '" + path + "'");
  const Grid& g = f.grid();
  out << (g.dim() == 1 ? "x,value\n" : "x,y,value\n") << std::setprecision(17);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Point x = g.node(k);
    out << x(0) << ',';
    if (g.dim() == 2) out << x(1) << ',';
    out << f.values()(k) << '\n';
  }
}

}  // namespace varleb::cli
