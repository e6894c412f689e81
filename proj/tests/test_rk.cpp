#include <doctest.h>

#include "support.hpp"
#include "varleb/errors.hpp"
#include "varleb/rk.hpp"

#include <cmath>
#include <numbers>

namespace doctest {
template <>
struct StringMaker<varleb::ProfileVerdict> {
  static String convert(varleb::ProfileVerdict v) { return varleb::verdictName(v); }
};
}  // namespace doctest

using namespace varleb;
using namespace varleb::testing;

namespace {
const Grid wide = Grid::line(-8.0, 8.0, 8193);
const ExponentField two = ExponentField::constant(wide.box(), 2.0);

FunctionFamily gaussian() {
  return {"gaussian", {GridFunction::sample(wide, [](const Point& x) { return std::exp(-x(0) * x(0)); })}};
}

PointFunction interval(double a, double b) {
  return [a, b](const Point& x) { return x(0) >= a && x(0) <= b ? 1.0 : 0.0; };
}
}  // namespace

TEST_CASE("uniform bound profile") {
  const auto w = WeightField::unit(wide);
  const auto g = uniformBoundProfile(gaussian(), two, w);
  CHECK(g.supValues.front() == doctest::Approx(std::pow(std::numbers::pi / 2, 0.25)).epsilon(1e-6));
  CHECK(g.verdict == ProfileVerdict::Pass);

  FunctionFamily scaled{"scaled", {}};
  const auto f = gaussian().members.front();
  for (int c = 1; c <= 10; ++c) scaled.members.push_back(static_cast<double>(c) * f);
  scaled.members.push_back(GridFunction::zero(wide));
  const auto s = uniformBoundProfile(scaled, two, w);
  CHECK(s.supValues.front() == doctest::Approx(10.0 * g.supValues.front()).epsilon(1e-9));
  CHECK(s.argmax.front() == 9);

  FunctionFamily zero{"zero", {GridFunction::zero(wide)}};
  CHECK(uniformBoundProfile(zero, two, w).supValues.front() == 0.0);
  CHECK_THROWS_AS(uniformBoundProfile(FunctionFamily{"empty", {}}, two, w), DomainError);
}

TEST_CASE("equicontinuity profile") {
  const auto c = canonicalRkCase("mollifier");
  const Grid& g = c.family.grid();
  const double h = g.maxStep();

  FunctionFamily flat{"flat", {GridFunction::constant(g, 2.0), GridFunction::constant(g, -1.0)}};
  const auto z = equicontinuityProfile(flat, c.p, c.w, 0.5, {2 * h, 8 * h}, 1e-12);
  CHECK(z.supValues[0] == 0.0);
  CHECK(z.supValues[1] == 0.0);
  CHECK(z.verdict == ProfileVerdict::Pass);

  // Smooth family: the profile is linear in r for small r. Half-integer radii keep the
  // discrete balls at 2k+1 nodes, whose mean |t| is k(k+1)/(2k+1) steps.
  const auto m = equicontinuityProfile(c.family, c.p, c.w, 1.0, {4.5 * h, 8.5 * h, 16.5 * h}, 1e-2);
  CHECK(m.supValues[1] / m.supValues[0] == doctest::Approx((72.0 / 17) / (20.0 / 9)).epsilon(0.01));
  CHECK(m.supValues[2] / m.supValues[1] == doctest::Approx((272.0 / 33) / (72.0 / 17)).epsilon(0.01));
  CHECK(m.verdict == ProfileVerdict::Pass);

  const auto o = canonicalRkCase("oscillation");
  const double ho = o.family.grid().maxStep();
  const auto osc = equicontinuityProfile(o.family, o.p, o.w, 1.0, {2 * ho, 16 * ho}, 1e-2);
  CHECK(osc.supValues.front() > 0.03);
  CHECK(osc.supValues.back() > 0.1);
  CHECK(osc.argmax.front() == o.family.size() - 1);
  CHECK(osc.verdict == ProfileVerdict::Fail);
  CHECK_THROWS_AS(equicontinuityProfile(o.family, o.p, o.w, 2.0, {ho}, 1.0), DomainError);
}

TEST_CASE("vanishing profile") {
  const auto w = WeightField::unit(wide);
  // Gaussian tail: ||e^{-x^2} chi_{|x|>=R}||_2^2 = sqrt(pi/2) erfc(sqrt(2) R).
  const auto gp = vanishingProfile(gaussian(), two, w, point(0.0), {0.5, 1.0, 2.0}, 1e-2);
  for (std::size_t i = 0; i < 3; ++i) {
    const double R = gp.parameter[i];
    const double exact = std::sqrt(std::sqrt(std::numbers::pi / 2) * std::erfc(std::sqrt(2.0) * R));
    CHECK(gp.supValues[i] == doctest::Approx(exact).epsilon(2e-3));
  }
  CHECK(gp.verdict == ProfileVerdict::Pass);

  // Translates of chi_[0,1] on [0,10] with x0 = 0: the tail keeps the last translate whole
  // while R <= 8.
  const Grid g = Grid::line(0.0, 10.0, 4097);
  const auto fam = translateFamily(g, interval(0.0, 1.0), 9, 1.0);
  const auto one = ExponentField::constant(g.box(), 2.0);
  const auto tp = vanishingProfile(fam, one, WeightField::unit(g), point(0.0), {1, 2, 4, 6, 8}, 1e-2);
  for (double v : tp.supValues) CHECK(v == doctest::Approx(1.0).epsilon(2 * g.maxStep()));
  CHECK(tp.verdict == ProfileVerdict::Fail);

  // Compact support inside B(5, 1.5): zero beyond.
  const auto inside = translateFamily(g, interval(4.0, 5.0), 2, 0.5);
  const auto ip = vanishingProfile(inside, one, WeightField::unit(g), point(5.0), {0.5, 1.0, 1.6, 2.0}, 1e-9);
  CHECK(ip.supValues[2] == 0.0);
  CHECK(ip.supValues[3] == 0.0);
  CHECK(ip.verdict == ProfileVerdict::Pass);

  // Nonincreasing in R for arbitrary families.
  std::mt19937_64 rng(17);
  const Grid sg = Grid::line(-1.0, 1.0, 513);
  for (int t = 0; t < 5; ++t) {
    FunctionFamily r{"random", {}};
    for (int k = 0; k < 4; ++k) r.members.push_back(randomFunction(sg, rng));
    const auto p = randomExponent(sg.box(), rng, 1.1, 4.0);
    std::vector<double> R;
    for (int k = 1; k <= 12; ++k) R.push_back(k / 12.0);
    const auto prof = vanishingProfile(r, p, WeightField::unit(sg), point(uniform(rng, -0.5, 0.5)), R, 1e-2);
    for (std::size_t i = 1; i < prof.supValues.size(); ++i) CHECK(prof.supValues[i] <= prof.supValues[i - 1]);
    CHECK(prof.supValues.front() >= 0.0);
  }
}

TEST_CASE("equi-integrability on thin slabs") {
  const Grid g = Grid::line(0.0, 1.0, 4097);
  const auto p = ExponentField::constant(g.box(), 2.0);
  const auto w = WeightField::unit(g);
  const auto slabs = thinSlabs(g.box(), point(0.5), 12);
  std::mt19937_64 rng(2);
  FunctionFamily bounded{"bounded", {}};
  for (int k = 0; k < 5; ++k)
    bounded.members.push_back(GridFunction::sample(g, [&, a = uniform(rng, 1.0, 3.0)](const Point& x) {
      return a * (2.0 + std::cos(x(0)));
    }));
  const auto b = equiIntegrabilityMeasure(bounded, p, w, slabs, 0.2);
  for (std::size_t i = 1; i < b.supValues.size(); ++i) {
    CHECK(b.supValues[i] <= b.supValues[i - 1]);
    CHECK(b.supValues[i] / b.supValues[i - 1] == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
  }
  CHECK(b.verdict == ProfileVerdict::Pass);

  // Spikes concentrating on the slabs keep unit mass on each of them.
  FunctionFamily spikes{"spikes", {}};
  for (int k = 1; k <= 12; ++k) {
    const double half = 0.5 * std::pow(2.0, -k);
    spikes.members.push_back(GridFunction::sample(g, [half](const Point& x) {
      return std::abs(x(0) - 0.5) < half ? 1.0 / std::sqrt(2 * half) : 0.0;
    }));
  }
  const auto s = equiIntegrabilityMeasure(spikes, p, w, slabs, 1e-1);
  for (double v : s.supValues) CHECK(v > 0.9);
  CHECK(s.verdict == ProfileVerdict::Fail);

  FunctionFamily zero{"zero", {GridFunction::zero(g)}};
  for (double v : equiIntegrabilityMeasure(zero, p, w, slabs, 0.0).supValues) CHECK(v == 0.0);
}

TEST_CASE("eps-net oracle") {
  const Grid g = Grid::line(0.0, 10.0, 4097);
  const auto p = ExponentField::constant(g.box(), 2.0);
  const auto w = WeightField::unit(g);
  const auto fam = translateFamily(g, interval(0.0, 0.5), 10, 1.0);
  const auto d = familyDistances(fam, p, w);
  double delta = kInfinity;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (i != j) delta = std::min(delta, d(i, j));
  CHECK(epsNetFromDistances(d, 0.49 * delta).centers.size() == 10);

  FunctionFamily copies{"copies", std::vector<GridFunction>(10, fam.members[3])};
  for (double eps : {1e-12, 1e-3, 1.0}) CHECK(epsNetOracle(copies, p, w, eps).centers.size() == 1);

  const auto m = canonicalRkCase("mollifier");
  const auto md = familyDistances(m.family, m.p, m.w);
  CHECK(epsNetFromDistances(md, md.maxCoeff()).centers.size() == 1);

  // Net size is nonincreasing in eps and the assignment covers within eps.
  std::mt19937_64 rng(8);
  const Grid sg = Grid::line(0.0, 1.0, 257);
  FunctionFamily r{"random", {}};
  for (int k = 0; k < 12; ++k) r.members.push_back(randomFunction(sg, rng));
  const auto sp = ExponentField::constant(sg.box(), 1.5);
  const auto rd = familyDistances(r, sp, WeightField::unit(sg));
  std::size_t last = r.size() + 1;
  for (int k = 12; k >= 0; --k) {
    const double eps = rd.maxCoeff() * std::pow(2.0, -k);
    const auto net = epsNetFromDistances(rd, eps);
    CHECK(net.centers.size() <= last);
    last = net.centers.size();
    for (std::size_t i = 0; i < r.size(); ++i)
      CHECK(rd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(net.centers[net.assignment[i]])) <= eps);
  }
  CHECK_THROWS_AS(epsNetFromDistances(rd, 0.0), DomainError);
}

TEST_CASE("family generators") {
  const Grid g = Grid::line(-1.0, 1.0, 1025);
  const PointFunction bump = [](const Point& x) { return std::exp(-20 * x(0) * x(0)); };
  const auto t = translateFamily(g, bump, 3, 0.25);
  CHECK(t.members[2].values()(g.nearestNode(point(0.5))) == doctest::Approx(1.0));
  const auto dl = dilateFamily(g, bump, 2, 1.0);
  CHECK(dl.members[1].values()(g.nearestNode(point(0.25))) == doctest::Approx(std::exp(-20 * 0.125 * 0.125)).epsilon(1e-2));
  const auto md = modulateFamily(g, [](const Point&) { return 1.0; }, 3, 1.0);
  CHECK(md.members[2].values()(g.nearestNode(point(0.5))) == doctest::Approx(std::sin(4 * g.node(g.nearestNode(point(0.5)))(0))));
  // Mollification of a constant is the constant away from the boundary, and converges.
  const auto mc = mollifyFamily(g, [](const Point&) { return 3.0; }, 3, 0.2);
  CHECK(mc.members[0].values()(512) == doctest::Approx(3.0).epsilon(1e-12));
  const auto ms = mollifyFamily(g, interval(-0.3, 0.3), 6, 0.4);
  const auto p = ExponentField::constant(g.box(), 2.0);
  const auto d = familyDistances(ms, p, WeightField::unit(g));
  for (Eigen::Index k = 1; k + 1 < d.rows(); ++k) CHECK(d(k, k + 1) < d(k - 1, k));
  CHECK_THROWS_AS(translateFamily(g, bump, 0, 1.0), DomainError);
}

TEST_CASE("classify canonical families") {
  for (bool doubled : {false, true}) {
    const auto m = canonicalRkCase("mollifier", doubled);
    const auto vm = classify(m.family, m.p, m.w, m.qTilde);
    CHECK(vm.verdict == "consistent-compact");
    CHECK(vm.failingClauses.empty());
    CHECK(vm.plateau);

    const auto t = canonicalRkCase("translate", doubled);
    const auto vt = classify(t.family, t.p, t.w, t.qTilde);
    CHECK(vt.verdict == "consistent-noncompact");
    CHECK((vt.failingClauses == std::vector<std::string>{"vanishing"}));

    const auto o = canonicalRkCase("oscillation", doubled);
    const auto vo = classify(o.family, o.p, o.w, o.qTilde);
    CHECK(vo.verdict == "consistent-noncompact");
    CHECK((vo.failingClauses == std::vector<std::string>{"equicontinuity"}));
    CHECK(vo.grows);
  }
  CHECK_THROWS_AS(canonicalRkCase("nope"), DomainError);
}

TEST_CASE("classify is deterministic and gated on the weight") {
  const auto m = canonicalRkCase("mollifier");
  const auto a = classify(m.family, m.p, m.w, m.qTilde), b = classify(m.family, m.p, m.w, m.qTilde);
  CHECK((a.equicontinuity.supValues == b.equicontinuity.supValues));
  CHECK((a.vanishing.supValues == b.vanishing.supValues));
  CHECK((a.netSizes == b.netSizes));
  CHECK(a.hypothesisConstant == doctest::Approx(1.0));

  const Grid& g = m.family.grid();
  // Ratio 1e400 between the ends of the box: finite values, overflowing constant.
  const auto bad = WeightField::sample(g, [](const Point& x) { return std::pow(10.0, 100.0 * x(0)); });
  CHECK_THROWS_AS(classify(m.family, m.p, bad, 1.0), HypothesisFailure);
  CHECK_THROWS_AS(classify(m.family, m.p, m.w, 2.0), DomainError);
}
