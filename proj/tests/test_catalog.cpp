#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "qeskit/catalog.hpp"
#include "qeskit/solver.hpp"
#include "qeskit/states.hpp"

using namespace qeskit;

namespace {

std::vector<double> sample(const Expr& e, const Params& p, const Grid& g) {
  std::vector<double> out(static_cast<std::size_t>(g.points));
  for (int i = 0; i < g.points; ++i) out[static_cast<std::size_t>(i)] = e.evaluate(g.x(i), p);
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

const ConstraintResult* by_name(const std::vector<ConstraintResult>& cs, const std::string& name) {
  for (const auto& c : cs) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("catalog lists the six entries with parameter schemas") {
  const auto& entries = catalog_entries();
  REQUIRE(entries.size() == 6);
  for (const char* name : {"case1", "case2", "case3", "oscillator", "rosen_morse", "razavy"}) {
    const CatalogEntry* e = find_entry(name);
    REQUIRE(e != nullptr);
    CHECK(!e->summary.empty());
    CHECK(!e->params.empty());
  }
  CHECK(find_entry("nope") == nullptr);
}

TEST_CASE("rational family margins flag each boundary") {
  SUBCASE("inside the admissible region") {
    for (const auto& c : rational_family_constraints(1.5, 3.0, 1.0)) {
      CHECK_MESSAGE(c.pass, c.name, ": ", c.detail);
      CHECK(c.margin > 0.0);
    }
  }
  SUBCASE("second gap two widths below the first violates a2 >= 0") {
    auto cs = rational_family_constraints(3.0, 1.0, 1.0);  // eps1 = eps - 2*b2
    const ConstraintResult* a2 = by_name(cs, "a2 nonnegative");
    REQUIRE(a2 != nullptr);
    CHECK(!a2->pass);
    CHECK(a2->margin == doctest::Approx(1.0 + 2.0 / 3.0 * (1.0 - 3.0)).epsilon(1e-12));
    CHECK(by_name(cs, "U6 inequality")->pass);
  }
  SUBCASE("oversized second gap violates the discriminant bound") {
    auto cs = rational_family_constraints(1.5, 7.0, 1.0);
    const ConstraintResult* u6 = by_name(cs, "U6 inequality");
    REQUIRE(u6 != nullptr);
    CHECK(!u6->pass);
    const double q_hi = 3.25 * 1.5 - 1.875 + 0.375 * std::sqrt(25.0 - 90.0 + 68.0 * 2.25);
    CHECK(u6->margin == doctest::Approx(q_hi - 7.0).epsilon(1e-12));
    CHECK(by_name(cs, "a2 nonnegative")->pass);
  }
  SUBCASE("margins agree with the generator validator on both sides") {
    const double cases[][3] = {{1.5, 6.4, 1.0}, {1.5, 6.6, 1.0}, {2.0, 0.55, 1.0},
                               {2.0, 0.45, 1.0}, {3.0, 2.0, 1.3}};
    for (const auto& t : cases) {
      bool inside = true;
      for (const auto& c : rational_family_constraints(t[0], t[1], t[2])) inside = inside && c.pass;
      GeneratorSpec g = rational_generator(t[0], t[1], t[2]);
      CHECK_MESSAGE(validate_generator(g, {-35.0, 35.0}).pass == inside, "eps1 = ", t[1]);
    }
  }
}

TEST_CASE("instantiate rejects out-of-region parameters by name") {
  CHECK_THROWS_AS((void)instantiate("nowhere"), std::invalid_argument);
  CHECK_THROWS_AS((void)instantiate("case1", {{"weird", 1.0}}), std::invalid_argument);
  try {
    (void)instantiate("case3", {{"b", 1.0}, {"eps1", -0.2}});
    FAIL("expected a constraint violation");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("eps1 > 0") != std::string::npos);
  }
  try {
    (void)instantiate("rosen_morse", {{"epsilon", 0.8}});
    FAIL("expected a constraint violation");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("epsilon > 1") != std::string::npos);
  }
  CHECK_THROWS_AS((void)instantiate("oscillator", {{"epsilon", -1.0}}), std::invalid_argument);
}

TEST_CASE("case1 closed forms match the construction pipeline") {
  EntryInstance inst = instantiate("case1");
  CHECK(inst.energies[1] == doctest::Approx(0.40192378864668403).epsilon(1e-12));
  CHECK(inst.energies[2] == doctest::Approx(1.2679491924311227).epsilon(1e-12));

  QesModel m = model_from_entry(inst, Grid(10.0, 4001));
  CHECK(m.grid.half_width == 10.0);
  REQUIRE(inst.closed.has_value());
  CHECK(max_abs_diff(m.v, sample(*inst.closed->v, inst.closed->params, m.grid)) < 1e-6);
  for (int n = 0; n < 3; ++n) {
    std::vector<double> ref = normalize_state(
        sample(inst.closed->psi[static_cast<std::size_t>(n)], inst.closed->params, m.grid),
        m.grid.h());
    const std::vector<double>& got = n == 0 ? m.psi0 : (n == 1 ? m.psi1 : m.psi2);
    CHECK_MESSAGE(max_abs_diff(got, ref) < 1e-6, "state ", n);
  }

  EntryInstance scaled = instantiate("case1", {{"c", 1.4}});
  CHECK(scaled.energies[1] == doctest::Approx(1.96 * inst.energies[1]).epsilon(1e-12));
  CHECK(scaled.energies[2] == doctest::Approx(1.96 * inst.energies[2]).epsilon(1e-12));
}

TEST_CASE("case2 potential agrees with the oscillator-partner form") {
  EntryInstance inst = instantiate("case2");
  CHECK(inst.energies == std::array<double, 3>{0.0, 1.5, 2.0});

  QesModel m = model_from_entry(inst, Grid(10.0, 4001));
  std::vector<double> printed = sample(*inst.closed->v, inst.closed->params, m.grid);
  Expr partner = Expr::parse("e^2*x^2/2 + 4*e/(1+2*e*x^2) - 8*e/(1+2*e*x^2)^2 + 3*e/2", {"e"});
  std::vector<double> partner_vals = sample(partner, {{"e", 0.5}}, m.grid);

  CHECK(max_abs_diff(m.v, printed) < 1e-8);
  CHECK(max_abs_diff(m.v, partner_vals) < 1e-8);
  CHECK(max_abs_diff(printed, partner_vals) < 1e-12);
  CHECK(printed[m.grid.nearest(0.0)] == doctest::Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("saturating-well bound-state count follows the decay rates") {
  CHECK(case3_bound_state_count(3.0) == 3);
  CHECK(case3_bound_state_count(1.7) == 3);
  CHECK(case3_bound_state_count(1.6) == 2);  // below (1+sqrt(5))/2 the third state grows
  CHECK(case3_bound_state_count(1.0) == 2);
  CHECK(case3_bound_state_count(0.8) == 2);
  CHECK(case3_bound_state_count(0.62) == 2);
  CHECK(case3_bound_state_count(0.617) == 1);
  CHECK(case3_bound_state_count(0.5) == 1);
  CHECK_THROWS_AS(case3_bound_state_count(0.0), std::invalid_argument);

  // The count drops exactly when the printed third state stops decaying.
  ClosedForms cf = case3_closed_forms(1.0, 0.3);  // alpha = 1.6
  Grid g(60.0, 6001);
  std::vector<double> psi2 = sample(cf.psi[2], cf.params, g);
  CHECK(tail_mass_fraction(psi2, 0.10) > 1e-6);
}

TEST_CASE("tail mass flips with the bound-state count") {
  const Grid g(60.0, 6001);
  const double alphas[] = {3.0, 0.8, 0.5};
  const int counts[] = {3, 2, 1};
  for (int t = 0; t < 3; ++t) {
    const double eps1 = 0.5 * (alphas[t] - 1.0);
    ClosedForms cf = case3_closed_forms(1.0, eps1);
    REQUIRE(case3_bound_state_count(alphas[t]) == counts[t]);
    for (int n = 0; n < 3; ++n) {
      std::vector<double> psi = sample(cf.psi[static_cast<std::size_t>(n)], cf.params, g);
      const double tail = tail_mass_fraction(psi, 0.10);
      CHECK_MESSAGE((tail < 1e-6) == (n < counts[t]), "alpha = ", alphas[t], ", state ", n,
                    ", tail fraction ", tail);
    }
  }
}

TEST_CASE("case3_model keeps only square-integrable states") {
  SUBCASE("three bound states at the default parameters") {
    QesModel m = case3_model(1.0, 1.0);
    CHECK(m.bound_states == 3);
    CHECK(m.grid.half_width == 40.0);
    CHECK(m.energies == std::array<double, 3>{0.0, 2.5, 3.5});
    REQUIRE(m.continuum_edge.has_value());
    CHECK(*m.continuum_edge == doctest::Approx(361.0 / 96.0).epsilon(1e-12));
    CHECK(inner_product(m.psi0, m.psi0, m.grid) == doctest::Approx(1.0).epsilon(1e-8));
    SpectrumReport rep = verify_model(m);
    CHECK_MESSAGE(rep.pass, "levels checked: ", rep.level_checks.size());
  }
  SUBCASE("two bound states just above the golden-ratio threshold") {
    QesModel m = case3_model(1.0, -0.1);  // alpha = 0.8
    CHECK(m.bound_states == 2);
    CHECK(m.psi2.empty());
    REQUIRE(!m.psi1.empty());
    CHECK(m.energies[1] == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(m.energies[1] < *m.continuum_edge);
    SpectrumReport rep = verify_model(m);
    CHECK(rep.pass);
    CHECK(rep.level_checks.size() == 2);
  }
  SUBCASE("single bound state") {
    QesModel m = case3_model(1.0, -0.25);  // alpha = 0.5
    CHECK(m.bound_states == 1);
    CHECK(m.psi1.empty());
    CHECK(m.psi2.empty());
    CHECK(m.grid.half_width == 20.0);
    SpectrumReport rep = verify_model(m);
    CHECK(rep.pass);
    CHECK(rep.level_checks.size() == 1);
  }
}

TEST_CASE("hyperbolic generators validate and build") {
  SUBCASE("tanh-squared generator") {
    EntryInstance inst = instantiate("rosen_morse");
    CHECK(inst.energies == std::array<double, 3>{0.0, 3.0, 5.0});
    REQUIRE(inst.continuum_edge.has_value());
    CHECK(*inst.continuum_edge == doctest::Approx(6.125).epsilon(1e-12));
    CHECK(inst.bound_states == 3);
    CHECK(validate_generator(inst.gen, {-10.0, 10.0}).pass);

    QesModel m = model_from_entry(inst, Grid(10.0, 4001));
    CHECK(m.grid.half_width == 20.0);
    for (int n = 0; n < 3; ++n) {
      const std::vector<double>& psi = n == 0 ? m.psi0 : (n == 1 ? m.psi1 : m.psi2);
      CHECK(count_nodes(psi) == n);
      CHECK(residual(m.v, psi, m.energies[static_cast<std::size_t>(n)], m.grid.h()) < 1e-5);
    }
    CHECK(verify_model(m).pass);
  }
  SUBCASE("sinh-squared generator") {
    EntryInstance inst = instantiate("razavy");
    CHECK(inst.energies == std::array<double, 3>{0.0, 1.0, 2.5});
    CHECK(!inst.continuum_edge.has_value());
    CHECK(validate_generator(inst.gen, {-10.0, 10.0}).pass);

    QesModel m = model_from_entry(inst, Grid(10.0, 4001));
    CHECK(m.grid.half_width == 10.0);
    CHECK(count_nodes(m.psi1) == 1);
    CHECK(count_nodes(m.psi2) == 2);
    CHECK(verify_model(m).pass);
  }
}

TEST_CASE("oscillator entry reproduces its closed forms") {
  EntryInstance inst = instantiate("oscillator", {{"epsilon", 2.0}});
  CHECK(inst.energies == std::array<double, 3>{0.0, 2.0, 4.0});
  QesModel m = model_from_entry(inst, Grid(10.0, 4001));
  CHECK(max_abs_diff(m.v, sample(*inst.closed->v, inst.closed->params, m.grid)) < 1e-8);
  std::vector<double> ref =
      normalize_state(sample(inst.closed->psi[1], inst.closed->params, m.grid), m.grid.h());
  CHECK(max_abs_diff(m.psi1, ref) < 1e-8);
}
