#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qeskit/superpot.hpp"

using qeskit::build_supertriple;
using qeskit::build_wplus_pair;
using qeskit::discriminant_R;
using qeskit::Expr;
using qeskit::GeneratorSpec;
using qeskit::Interval;
using qeskit::locate_generator_zeros;
using qeskit::Params;
using qeskit::potential;
using qeskit::SignSchedule;
using qeskit::SuperTriple;
using qeskit::validate_generator;
using qeskit::ValidationReport;
using qeskit::WPlusPair;

namespace {

const double kS3 = std::sqrt(3.0);

GeneratorSpec rational_spec(double e, double e1, double b2) {
  GeneratorSpec g;
  double a2 = b2 + 2.0 / 3.0 * (e1 - e);
  g.u = Expr::parse("4*e*e1*x^2*(1+a2*x^2)/(1+b2*x^2)", {"e", "e1", "a2", "b2"});
  g.epsilon = e;
  g.epsilon1 = e1;
  g.params = {{"e", e}, {"e1", e1}, {"a2", a2}, {"b2", b2}};
  g.x0 = 0.0;
  return g;
}

GeneratorSpec case1_spec(double c) {
  double b2 = (2.0 - kS3) * c * c;
  return rational_spec(1.5 * b2, (1.5 + kS3) * b2, b2);
}

GeneratorSpec oscillator_spec(double e) {
  GeneratorSpec g;
  g.u = Expr::parse("4*e*e1*x^2", {"e", "e1"});
  g.epsilon = e;
  g.epsilon1 = e;
  g.params = {{"e", e}, {"e1", e}};
  g.x0 = 0.0;
  return g;
}

const qeskit::ConditionCheck* find_check(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name.find(name) != std::string::npos) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("sign schedule lookup") {
  SignSchedule s;
  CHECK(s.at(-100.0) == 1);
  CHECK(s.at(100.0) == 1);
  s.breakpoints = {-1.0, 2.0};
  s.signs = {1, -1, 1};
  CHECK(s.at(-2.0) == 1);
  CHECK(s.at(-1.0) == -1);
  CHECK(s.at(0.0) == -1);
  CHECK(s.at(2.0) == 1);
  CHECK(s.at(5.0) == 1);
}

TEST_CASE("zero location finds the single well bottom") {
  GeneratorSpec g = case1_spec(1.0);
  g.x0.reset();
  auto zeros = locate_generator_zeros(g, Interval{-10.0, 10.0}, 2001);
  REQUIRE(zeros.size() == 1);
  CHECK(std::fabs(zeros[0]) < 1e-12);
}

TEST_CASE("oscillator generator reproduces the linear superpotential exactly") {
  GeneratorSpec g = oscillator_spec(1.0);
  WPlusPair pair = build_wplus_pair(g, 10.0);
  CHECK(pair.x0 == doctest::Approx(0.0).epsilon(1e-14));
  SuperTriple t = build_supertriple(pair);

  double worst_w = 0.0, worst_r = 0.0, worst_d = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    double x = -8.0 + 0.004 * i;
    double tol = std::fabs(x) < pair.zone ? 1e-7 : 1e-9;
    CHECK(std::fabs(t.w0(x) - x) < tol);
    CHECK(std::fabs(t.w1(x) - x) < tol);
    CHECK(std::fabs(t.w2(x) - x) < tol);
    worst_w = std::max(worst_w, std::fabs(pair.wplus(x) - 2.0 * x));
    worst_r = std::max(worst_r, std::fabs(pair.r(x) - 2.0 * x * x));
    worst_d = std::max(worst_d, std::fabs(t.w0.deriv(x) - 1.0));
  }
  CHECK(worst_w < 1e-9);
  CHECK(worst_r < 1e-10);
  CHECK(worst_d < 1e-7);
}

TEST_CASE("validation accepts the catalog generators") {
  SUBCASE("rational single-well, both parameter sets") {
    for (double c : {1.0, 1.7}) {
      ValidationReport r = validate_generator(case1_spec(c), Interval{-10.0, 10.0});
      CHECK(r.pass);
      CHECK(std::fabs(r.x0) < 1e-10);
    }
  }
  SUBCASE("pure rational well with a = 0") {
    GeneratorSpec g;
    g.u = Expr::parse("4*e*e1*x^2/(1+b2*x^2)", {"e", "e1", "b2"});
    g.epsilon = 2.5;
    g.epsilon1 = 1.0;
    g.params = {{"e", 2.5}, {"e1", 1.0}, {"b2", 1.0}};
    CHECK(validate_generator(g, Interval{-10.0, 10.0}).pass);
  }
  SUBCASE("tanh well") {
    GeneratorSpec g;
    g.u = Expr::parse("4*e*e1*tanh(x)^2", {"e", "e1"});
    g.epsilon = 3.0;
    g.epsilon1 = 2.0;
    g.params = {{"e", 3.0}, {"e1", 2.0}};
    CHECK(validate_generator(g, Interval{-8.0, 8.0}).pass);
  }
  SUBCASE("sinh well") {
    GeneratorSpec g;
    g.u = Expr::parse("4*e*e1*sinh(x)^2", {"e", "e1"});
    g.epsilon = 1.0;
    g.epsilon1 = 1.5;
    g.params = {{"e", 1.0}, {"e1", 1.5}};
    CHECK(validate_generator(g, Interval{-6.0, 6.0}).pass);
  }
}

TEST_CASE("validation rejects broken generators with the right condition named") {
  SUBCASE("fourth derivative mismatch") {
    GeneratorSpec g;
    g.u = Expr::parse("4*e*e1*x^2", {"e", "e1"});
    g.epsilon = 1.0;
    g.epsilon1 = 0.7;
    g.params = {{"e", 1.0}, {"e1", 0.7}};
    ValidationReport r = validate_generator(g, Interval{-10.0, 10.0});
    CHECK_FALSE(r.pass);
    const auto* c = find_check(r, "U''''(x0)");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
  }
  SUBCASE("two zeros") {
    GeneratorSpec g;
    g.u = Expr::parse("e*e1*(x^2-1)^2", {"e", "e1"});
    g.epsilon = 1.0;
    g.epsilon1 = 1.0;
    g.params = {{"e", 1.0}, {"e1", 1.0}};
    ValidationReport r = validate_generator(g, Interval{-10.0, 10.0});
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.diagnostics.empty());
    CHECK(r.diagnostics[0].find("zeros") != std::string::npos);
  }
  SUBCASE("no zero") {
    GeneratorSpec g;
    g.u = Expr::parse("4*e*e1*(x^2+1)", {"e", "e1"});
    g.epsilon = 1.0;
    g.epsilon1 = 1.0;
    g.params = {{"e", 1.0}, {"e1", 1.0}};
    ValidationReport r = validate_generator(g, Interval{-10.0, 10.0});
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.diagnostics.empty());
    CHECK(r.diagnostics[0].find("no zero") != std::string::npos);
  }
  SUBCASE("negative gap") {
    GeneratorSpec g = oscillator_spec(1.0);
    g.epsilon1 = -1.0;
    ValidationReport r = validate_generator(g, Interval{-10.0, 10.0});
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("slope identities at the well bottom") {
  struct Probe {
    GeneratorSpec g;
    double hw;
  };
  std::vector<Probe> probes;
  probes.push_back({case1_spec(1.0), 10.0});
  {
    GeneratorSpec g;
    g.u = Expr::parse("4*e*e1*x^2/(1+b2*x^2)", {"e", "e1", "b2"});
    g.epsilon = 2.5;
    g.epsilon1 = 1.0;
    g.params = {{"e", 2.5}, {"e1", 1.0}, {"b2", 1.0}};
    g.x0 = 0.0;
    probes.push_back({g, 10.0});
  }
  {
    GeneratorSpec g;
    g.u = Expr::parse("4*e*e1*sinh(x)^2", {"e", "e1"});
    g.epsilon = 1.0;
    g.epsilon1 = 1.5;
    g.params = {{"e", 1.0}, {"e1", 1.5}};
    g.x0 = 0.0;
    probes.push_back({g, 6.0});
  }
  for (const auto& p : probes) {
    WPlusPair pair = build_wplus_pair(p.g, p.hw);
    double sp = pair.wplus.deriv(pair.x0);
    double st = pair.wtilde.deriv(pair.x0);
    CHECK(std::fabs(sp - 2.0 * p.g.epsilon) < 1e-6 * 2.0 * p.g.epsilon);
    CHECK(std::fabs(st - 2.0 * p.g.epsilon1) < 1e-6 * 2.0 * p.g.epsilon1);
  }
}

TEST_CASE("factorization structure of the rational single well") {
  GeneratorSpec g = case1_spec(1.0);
  WPlusPair pair = build_wplus_pair(g, 10.0);
  SuperTriple t = build_supertriple(pair);
  const double e = g.epsilon, e1 = g.epsilon1;

  SUBCASE("product of the factors reproduces U") {
    for (double x : {-6.0, -2.3, -0.4, 0.37, 1.1, 4.9, 8.0}) {
      double u = g.u.evaluate(x, g.params);
      double prod = pair.wplus(x) * pair.wtilde(x);
      CHECK(std::fabs(prod - u) < 1e-9 * std::max(1.0, std::fabs(u)));
    }
  }
  SUBCASE("both routes assemble the middle factor") {
    for (double x : {-5.0, -1.2, -0.2, 0.33, 2.7, 7.5}) {
      CHECK(std::fabs(t.w1(x) + t.w2(x) - pair.wtilde(x)) <
            1e-6 * std::max(1.0, std::fabs(pair.wtilde(x))));
      CHECK(std::fabs(t.w0(x) + t.w1(x) - pair.wplus(x)) < 1e-12 * std::max(1.0, std::fabs(pair.wplus(x))));
    }
  }
  SUBCASE("ladder of potentials shifts by the gaps") {
    qeskit::SmoothFn vp0 = potential(t.w0, +1);
    qeskit::SmoothFn vm1 = potential(t.w1, -1);
    qeskit::SmoothFn vp1 = potential(t.w1, +1);
    qeskit::SmoothFn vm2 = potential(t.w2, -1);
    for (double x : {-6.0, -1.5, -0.05, 0.4, 1.9, 5.2}) {
      if (std::fabs(x - pair.x0) < pair.zone) continue;
      CHECK(std::fabs(vp0(x) - vm1(x) - e) < 1e-9 * std::max(1.0, std::fabs(vp0(x))));
      CHECK(std::fabs(vp1(x) - vm2(x) - e1) < 1e-9 * std::max(1.0, std::fabs(vp1(x))));
    }
  }
  SUBCASE("even generator gives an odd base superpotential") {
    for (double x : {0.3, 1.7, 4.2, 7.9}) {
      CHECK(std::fabs(t.w0(x) + t.w0(-x)) < 1e-9 * std::max(1.0, std::fabs(t.w0(x))));
    }
  }
  SUBCASE("jets are consistent with finite differences") {
    for (double x : {-3.1, 0.8, 2.6}) {
      double h = 1e-4;
      double fd1 = (pair.wplus(x + h) - pair.wplus(x - h)) / (2.0 * h);
      double fd2 = (pair.wplus(x + h) - 2.0 * pair.wplus(x) + pair.wplus(x - h)) / (h * h);
      CHECK(std::fabs(fd1 - pair.wplus.deriv(x)) < 1e-6 * std::max(1.0, std::fabs(fd1)));
      CHECK(std::fabs(fd2 - pair.wplus.deriv2(x)) < 1e-4 * std::max(1.0, std::fabs(fd2)));
      double fd0 = (t.w0(x + h) - t.w0(x - h)) / (2.0 * h);
      CHECK(std::fabs(fd0 - t.w0.deriv(x)) < 1e-6 * std::max(1.0, std::fabs(fd0)));
    }
  }
}

TEST_CASE("discriminant function") {
  GeneratorSpec g = oscillator_spec(1.0);
  CHECK(discriminant_R(g, 1.5) == doctest::Approx(4.5).epsilon(1e-9));
  CHECK(discriminant_R(g, -0.75) == doctest::Approx(1.125).epsilon(1e-9));
}

TEST_CASE("radicand violation is rejected and reported") {
  // Second gap far above the admissible band for this well shape.
  GeneratorSpec g = rational_spec(1.5, 7.0, 1.0);
  ValidationReport r = validate_generator(g, Interval{-10.0, 10.0});
  CHECK_FALSE(r.pass);
  const auto* c = find_check(r, "R > 0");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);

  bool threw = false;
  try {
    WPlusPair pair = build_wplus_pair(g, 10.0);
    for (int i = 0; i <= 600; ++i) (void)pair.wplus(-3.0 + 0.01 * i);
  } catch (const std::domain_error&) {
    threw = true;
  }
  CHECK(threw);
}
