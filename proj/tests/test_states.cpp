#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qeskit/numerics.hpp"
#include "qeskit/states.hpp"

using namespace qeskit;

namespace {

const double kS3 = std::sqrt(3.0);

SmoothFn linear_w(double slope) {
  return SmoothFn([slope](long double x) -> SmoothFn::Jet {
    return {(long double)slope * x, (long double)slope, 0.0L};
  });
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

GeneratorSpec case1_spec(double c) {
  double b2 = (2.0 - kS3) * c * c;
  double e = 1.5 * b2, e1 = (1.5 + kS3) * b2;
  double a2 = b2 + 2.0 / 3.0 * (e1 - e);
  GeneratorSpec g;
  g.u = Expr::parse("4*e*e1*x^2*(1+a2*x^2)/(1+b2*x^2)", {"e", "e1", "a2", "b2"});
  g.epsilon = e;
  g.epsilon1 = e1;
  g.params = {{"e", e}, {"e1", e1}, {"a2", a2}, {"b2", b2}};
  g.x0 = 0.0;
  return g;
}

GeneratorSpec case3_spec(double b, double e1) {
  GeneratorSpec g;
  double b2 = b * b;
  g.u = Expr::parse("4*e*e1*x^2/(1+b2*x^2)", {"e", "e1", "b2"});
  g.epsilon = e1 + 1.5 * b2;
  g.epsilon1 = e1;
  g.params = {{"e", g.epsilon}, {"e1", e1}, {"b2", b2}};
  g.x0 = 0.0;
  return g;
}

std::vector<double> sample_expr(const Expr& f, const Params& p, const Grid& grid) {
  std::vector<double> out((std::size_t)grid.points);
  for (int i = 0; i < grid.points; ++i) out[(std::size_t)i] = f.evaluate(grid.x(i), p);
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

int count_sign_changes(const std::vector<double>& psi) {
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::fabs(v));
  int last = 0, flips = 0;
  for (double v : psi) {
    if (std::fabs(v) <= 1e-9 * peak) continue;
    int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++flips;
    last = s;
  }
  return flips;
}

double schrodinger_residual(const std::vector<double>& v, const std::vector<double>& psi,
                            double e, double h) {
  std::vector<double> d2 = num::derivative2(psi, h);
  double peak = 0.0;
  for (double p : psi) peak = std::max(peak, std::fabs(p));
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < psi.size(); ++i)
    worst = std::max(worst, std::fabs(-0.5 * d2[i] + (v[i] - e) * psi[i]));
  return worst / peak;
}

}  // namespace

TEST_CASE("zero mode of a linear superpotential is the Gaussian") {
  Grid grid(10.0, 2001);
  std::vector<double> psi = ground_state(linear_w(1.0), grid, 0.0);
  const double c = std::pow(M_PI, -0.25);
  for (int i = 0; i < grid.points; i += 13) {
    double x = grid.x(i);
    CHECK(std::fabs(psi[(std::size_t)i] - c * std::exp(-0.5 * x * x)) < 1e-12);
  }
  CHECK(std::fabs(inner_product(psi, psi, grid) - 1.0) < 1e-10);
}

TEST_CASE("ground_state rejects a superpotential with bad endpoint signs") {
  Grid grid(10.0, 2001);
  CHECK_THROWS_AS((void)ground_state(linear_w(-1.0), grid, 0.0), std::runtime_error);
}

TEST_CASE("oscillator pipeline matches the Hermite ladder") {
  Grid grid(10.0, 2001);
  GeneratorSpec g = oscillator_spec(1.0);
  QesModel m = build_model(g, grid);

  Expr h0 = Expr::parse("exp(-x^2/2)");
  Expr h1 = Expr::parse("x*exp(-x^2/2)");
  Expr h2 = Expr::parse("(2*x^2-1)*exp(-x^2/2)");
  CHECK(max_abs_diff(m.psi0, normalize_state(sample_expr(h0, {}, grid), grid.h())) < 1e-9);
  CHECK(max_abs_diff(m.psi1, normalize_state(sample_expr(h1, {}, grid), grid.h())) < 1e-9);
  CHECK(max_abs_diff(m.psi2, normalize_state(sample_expr(h2, {}, grid), grid.h())) < 1e-9);
  CHECK(m.energies[0] == 0.0);
  CHECK(m.energies[1] == doctest::Approx(1.0));
  CHECK(m.energies[2] == doctest::Approx(2.0));
}

TEST_CASE("rational single well reproduces its closed forms") {
  GeneratorSpec g = case1_spec(1.0);
  Grid grid(10.0, 4001);
  QesModel m = build_model(g, grid);
  REQUIRE(m.grid.half_width == 10.0);

  Params p = {{"s3", kS3}, {"p0", (3.0 - kS3) / 2.0}, {"p1", (kS3 - 1.0) / 2.0}};
  Expr f0 = Expr::parse("exp(-s3/4*x^2 + p0*log(1+x^2))", {"s3", "p0"});
  Expr f1 = Expr::parse("x*exp(-s3/4*x^2 + p1*log(1+x^2))", {"s3", "p1"});
  Expr f2 = Expr::parse("(1-x^2)*exp(-s3/4*x^2 + p1*log(1+x^2))", {"s3", "p1"});

  SUBCASE("wavefunctions pointwise") {
    CHECK(max_abs_diff(m.psi0, normalize_state(sample_expr(f0, p, grid), grid.h())) < 1e-6);
    CHECK(max_abs_diff(m.psi1, normalize_state(sample_expr(f1, p, grid), grid.h())) < 1e-6);
    CHECK(max_abs_diff(m.psi2, normalize_state(sample_expr(f2, p, grid), grid.h())) < 1e-6);
  }

  SUBCASE("potential pointwise") {
    Expr vref = Expr::parse("3*x^2/8 + (3-s3)/(1+x^2) + (2*s3-3)/(1+x^2)^2 - 7*s3/4 + 3/2",
                            {"s3"});
    std::vector<double> want = sample_expr(vref, {{"s3", kS3}}, grid);
    double worst = 0.0;
    for (int i = 0; i < grid.points; ++i) {
      if (std::fabs(grid.x(i)) < 0.02) continue;  // interpolation zone
      worst = std::max(worst, std::fabs(m.v[(std::size_t)i] - want[(std::size_t)i]));
    }
    CHECK(worst < 1e-8);
  }

  SUBCASE("orthonormal with the right node counts") {
    const std::vector<double>* psis[3] = {&m.psi0, &m.psi1, &m.psi2};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double ip = inner_product(*psis[i], *psis[j], grid);
        if (i == j)
          CHECK(std::fabs(ip - 1.0) < 1e-8);
        else
          CHECK(std::fabs(ip) < 1e-6);
      }
    CHECK(count_sign_changes(m.psi0) == 0);
    CHECK(count_sign_changes(m.psi1) == 1);
    CHECK(count_sign_changes(m.psi2) == 2);
    for (double v : m.psi0) CHECK(v > 0.0);
  }

  SUBCASE("Schrodinger residuals") {
    CHECK(schrodinger_residual(m.v, m.psi0, m.energies[0], grid.h()) < 1e-5);
    CHECK(schrodinger_residual(m.v, m.psi1, m.energies[1], grid.h()) < 1e-5);
    CHECK(schrodinger_residual(m.v, m.psi2, m.energies[2], grid.h()) < 1e-5);
  }
}

TEST_CASE("slow-tail well widens its grid adaptively and matches its zero mode") {
  GeneratorSpec g = case3_spec(1.0, 1.0);
  QesModel m = build_model(g, Grid(10.0, 4001));
  CHECK(m.grid.half_width == 40.0);  // two doublings for the marginal top state

  // alpha = 3: closed zero mode in terms of rho = sqrt(1+12(1+x^2)).
  Params p = {{"k0", 19.0 / 24.0}};
  Expr f0 = Expr::parse(
      "(sqrt(1+12*(1+x^2))+3)/(sqrt(1+12*(1+x^2))-1)*exp(-k0*sqrt(1+12*(1+x^2)))", {"k0"});
  CHECK(max_abs_diff(m.psi0, normalize_state(sample_expr(f0, p, m.grid), m.grid.h())) < 1e-6);

  for (const auto* psi : {&m.psi0, &m.psi1, &m.psi2})
    CHECK(tail_mass_fraction(*psi, 0.10) < 1e-6);
}

TEST_CASE("ladder operator maps") {
  Grid grid(10.0, 2001);
  GeneratorSpec g = case1_spec(1.0);
  WPlusPair pair = build_wplus_pair(g, grid.half_width);
  SuperTriple t = build_supertriple(pair);
  std::vector<double> psi0 = ground_state(t.w0, grid, pair.x0);
  auto [psi1, psi2] = excited_states(t, pair.wplus, pair.wtilde, grid);

  SUBCASE("annihilates its own zero mode") {
    std::vector<double> z = apply_B(t.w0, -1, psi0, grid);
    double peak = 0.0;
    for (double v : psi0) peak = std::max(peak, std::fabs(v));
    for (std::size_t i = 2; i + 2 < z.size(); ++i) CHECK(std::fabs(z[i]) < 1e-6 * peak);
  }

  SUBCASE("lowering the first excited state lands on the partner zero mode") {
    std::vector<double> mapped =
        normalize_state(apply_B(t.w0, -1, psi1, grid), grid.h());
    std::vector<double> partner = ground_state(t.w1, grid, pair.x0);
    CHECK(max_abs_diff(mapped, partner) < 1e-6);
  }

  SUBCASE("zero superpotential degenerates to a derivative") {
    SmoothFn zero([](long double) -> SmoothFn::Jet { return {0.0L, 0.0L, 0.0L}; });
    std::vector<double> f((std::size_t)grid.points);
    for (int i = 0; i < grid.points; ++i) f[(std::size_t)i] = grid.x(i) * grid.x(i);
    std::vector<double> out = apply_B(zero, +1, f, grid);
    for (int i = 100; i < grid.points; i += 171)
      CHECK(out[(std::size_t)i] ==
            doctest::Approx(-2.0 * grid.x(i) / std::sqrt(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("normalization helpers") {
  Grid grid(1.0, 101);
  SUBCASE("sign convention follows the rightmost lobe") {
    std::vector<double> psi((std::size_t)grid.points);
    for (int i = 0; i < grid.points; ++i) psi[(std::size_t)i] = -grid.x(i);  // negative at right
    std::vector<double> n = normalize_state(psi, grid.h());
    CHECK(n.back() > 0.0);
  }
  SUBCASE("tail fraction of a flat function is the window fraction") {
    std::vector<double> flat(1000, 1.0);
    CHECK(tail_mass_fraction(flat, 0.10) == doctest::Approx(0.10).epsilon(1e-2));
  }
  SUBCASE("vanishing norm throws") {
    std::vector<double> zero(101, 0.0);
    CHECK_THROWS_AS((void)normalize_state(zero, 0.01), std::runtime_error);
  }
}
