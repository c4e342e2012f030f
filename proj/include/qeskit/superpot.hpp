#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qeskit/expr.hpp"
#include "qeskit/function.hpp"

namespace qeskit {

// Piecewise-constant sign (+1 / -1) as a function of x.
struct SignSchedule {
  std::vector<double> breakpoints;  // strictly increasing
  std::vector<int> signs;           // size() == breakpoints.size() + 1

  SignSchedule() : signs{+1} {}
  int at(double x) const {
    std::size_t i = 0;
    while (i < breakpoints.size() && x >= breakpoints[i]) ++i;
    return signs[i];
  }
};

// A generator function U together with the two lowest level gaps it encodes.
struct GeneratorSpec {
  Expr u;                     // U(x), may reference named parameters
  double epsilon = 1.0;       // first gap, E1 - E0
  double epsilon1 = 1.0;      // second gap, E2 - E1
  Params params;              // bound parameter values for u
  SignSchedule sign_schedule; // branch sign of the discriminant root
  std::optional<double> x0;   // zero of U, if known analytically
};

struct Interval {
  double lo = -10.0;
  double hi = 10.0;
};

struct ConditionCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double required = 0.0;
  double margin = 0.0;  // positive means satisfied with room to spare
};

struct ValidationReport {
  bool pass = false;
  double x0 = 0.0;
  std::vector<ConditionCheck> checks;
  std::vector<std::string> diagnostics;
};

// Zeros of U inside `scan`, located by sign changes of U' refined with
// bisection and Newton polish, then filtered by |U| at the critical point.
std::vector<double> locate_generator_zeros(const GeneratorSpec& g, Interval scan, int points);

// Checks every admissibility condition a generator must satisfy: positivity
// away from the zero, the Taylor data at the zero (values of U'' through the
// sixth-derivative inequality), and positivity of the discriminant radicand.
ValidationReport validate_generator(const GeneratorSpec& g, Interval scan, int points = 2001);

// The pair of factor superpotentials built from U, with the branch function R.
// Inside |x - x0| < zone the values come from interpolation through nodes of
// the exact formulas; outside they are evaluated directly.
struct WPlusPair {
  SmoothFn wplus;   // W+ = w0 + w1
  SmoothFn wtilde;  // W~+ = w1 + w2
  SmoothFn r;       // R >= 0, second derivative not provided
  double x0 = 0.0;
  double zone = 0.0;
  double half_width = 0.0;
  double epsilon = 0.0;
  double epsilon1 = 0.0;
};

WPlusPair build_wplus_pair(const GeneratorSpec& g, double half_width = 10.0);

// The three superpotentials of the factorization chain. Second derivatives
// are not provided (jet entry 2 is NaN).
struct SuperTriple {
  SmoothFn w0, w1, w2;
  double epsilon = 0.0;
  double epsilon1 = 0.0;
  double x0 = 0.0;        // zero of W+
  double x0_tilde = 0.0;  // zero of W~+
};

// Splits the pair into (w0, w1, w2). w1 is computed from W+ and checked
// against the independent route through W~+; disagreement beyond 1e-6
// (relative) throws.
SuperTriple build_supertriple(const WPlusPair& pair);

// V = (w^2 + sign * w') / 2. sign must be +1 or -1.
SmoothFn potential(const SmoothFn& w, int sign);

// R(x) for the given generator; throws if the radicand is negative beyond
// round-off tolerance.
double discriminant_R(const GeneratorSpec& g, double x);

}  // namespace qeskit
