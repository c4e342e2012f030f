#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qeskit/expr.hpp"
#include "qeskit/states.hpp"
#include "qeskit/superpot.hpp"

namespace qeskit {

struct ParamSpec {
  std::string name;
  double value = 0.0;  // default
  std::string doc;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
};

struct ConstraintResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // distance to the boundary, positive when satisfied
  std::string detail;
};

// Reference formulas printed for an entry (may be partial).
struct ClosedForms {
  std::optional<Expr> v;   // V- as a closed expression
  std::vector<Expr> psi;   // unnormalized eigenfunctions, ascending
  Params params;           // bound values for the expressions above
};

struct EntryInstance {
  std::string name;
  std::string summary;
  GeneratorSpec gen;
  std::optional<ClosedForms> closed;
  std::array<double, 3> energies{0.0, 0.0, 0.0};
  std::optional<double> continuum_edge;
  int bound_states = 3;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry* find_entry(const std::string& name);

// Per-entry admissibility with numeric margins; never throws.
std::vector<ConstraintResult> check_constraints(const std::string& name, const Params& params);

// Builds the generator and closed forms; throws std::invalid_argument naming
// the violated inequality when the parameters sit outside the entry's region.
EntryInstance instantiate(const std::string& name, const Params& params = {});

// The one-parameter-family well 4*eps*eps1*x^2*(1+a2*x^2)/(1+b2*x^2) with a2
// tied to the gaps: a2 = b2 + 2/3*(eps1 - eps).
GeneratorSpec rational_generator(double eps, double eps1, double b2);

// Margins for that family: positive gaps, a2 >= 0, and the second gap below
// the discriminant bound q_hi(p) = 13p/4 - 15/8 + (3/8)sqrt(25 - 60p + 68p^2)
// in the ratios p = eps/b2, q = eps1/b2.
std::vector<ConstraintResult> rational_family_constraints(double eps, double eps1, double b2);

// Closed forms of the saturating well for any alpha = 1 + 2*eps1/b^2 > 0.
ClosedForms case3_closed_forms(double b, double eps1);

// Model assembled from the closed forms; stores only the square-integrable
// states (bound_states of them) and records the continuum edge.
QesModel case3_model(double b, double eps1);

// 3 for alpha > 1, 2 down to the golden-ratio threshold (sqrt(5)-1)/2, else 1.
int case3_bound_state_count(double alpha);

// Convenience: run the construction pipeline for an entry and attach its
// metadata (continuum edge, bound-state count, description).
QesModel model_from_entry(const EntryInstance& inst, Grid grid, bool adaptive = true);

}  // namespace qeskit
