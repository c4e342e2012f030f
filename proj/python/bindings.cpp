#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qeskit/chains.hpp"
#include "qeskit/io.hpp"
#include "qeskit/solver.hpp"

namespace py = pybind11;
using namespace qeskit;

namespace {

GeneratorSection make_section(const std::string& catalog, const std::string& expression,
                              const Params& params, double epsilon, double epsilon1,
                              std::optional<double> x0) {
  GeneratorSection g;
  if (!catalog.empty()) g.catalog_name = catalog;
  if (!expression.empty()) g.expression = expression;
  if (g.catalog_name.has_value() == g.expression.has_value()) {
    throw std::invalid_argument("give exactly one of catalog= or expression=");
  }
  g.params = params;
  g.epsilon = epsilon;
  g.epsilon1 = epsilon1;
  g.x0 = x0;
  return g;
}

py::dict model_dict(const QesModel& m) {
  py::dict d;
  d["x"] = m.grid.abscissas();
  d["v"] = m.v;
  d["psi0"] = m.psi0;
  d["psi1"] = m.psi1;
  d["psi2"] = m.psi2;
  d["energies"] = m.energies;
  d["bound_states"] = m.bound_states;
  d["epsilon"] = m.epsilon;
  d["epsilon1"] = m.epsilon1;
  d["continuum_edge"] = m.continuum_edge ? py::cast(*m.continuum_edge) : py::none();
  d["description"] = m.description;
  d["half_width"] = m.grid.half_width;
  d["points"] = m.grid.points;
  return d;
}

py::dict report_dict(const SpectrumReport& r) {
  py::dict d;
  d["pass"] = r.pass;
  d["levels"] = r.levels;
  d["eigenvalues"] = r.eigenvalues;
  d["eigenvalues_fine"] = r.eigenvalues_fine;
  d["refined"] = r.refined;
  py::list checks;
  for (const auto& c : r.level_checks) {
    py::dict cd;
    cd["expected"] = c.expected;
    cd["fd"] = c.fd;
    cd["refined"] = c.refined;
    cd["error"] = c.error;
    cd["pass"] = c.pass;
    checks.append(cd);
  }
  d["level_checks"] = checks;
  d["residuals"] = r.residuals;
  d["node_counts"] = r.node_counts;
  d["gram_max_offdiag"] = r.gram_max_offdiag;
  d["gram_max_diag_err"] = r.gram_max_diag_err;
  d["notes"] = r.notes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qeskit, mod) {
  mod.doc() = "Three-level quasi-exact wells: construction, verification, widening chains";
  mod.attr("schema_version") = kSchemaVersion;

  mod.def(
      "catalog_names",
      [] {
        std::vector<std::string> out;
        for (const auto& e : catalog_entries()) out.push_back(e.name);
        return out;
      },
      "Names of the bundled generator catalog entries.");

  mod.def(
      "catalog_defaults",
      [](const std::string& name) {
        const CatalogEntry* e = find_entry(name);
        if (e == nullptr) throw std::invalid_argument("unknown catalog entry '" + name + "'");
        Params p;
        for (const auto& ps : e->params) p[ps.name] = ps.value;
        return p;
      },
      py::arg("name"), "Default parameter values of one catalog entry.");

  mod.def(
      "evaluate_expression",
      [](const std::string& text, double x, const Params& params) {
        std::vector<std::string> names;
        names.reserve(params.size());
        for (const auto& [k, v] : params) names.push_back(k);
        return Expr::parse(text, names).evaluate(x, params);
      },
      py::arg("text"), py::arg("x"), py::arg("params") = Params{},
      "Parse and evaluate an expression in x with named parameters.");

  mod.def(
      "build",
      [](const std::string& catalog, const std::string& expression, const Params& params,
         double epsilon, double epsilon1, std::optional<double> x0, double half_width,
         int points, bool adaptive) {
        const GeneratorSection g =
            make_section(catalog, expression, params, epsilon, epsilon1, x0);
        return model_dict(build_from_section(g, Grid(half_width, points), adaptive));
      },
      py::arg("catalog") = "", py::arg("expression") = "", py::arg("params") = Params{},
      py::arg("epsilon") = 1.0, py::arg("epsilon1") = 1.0,
      py::arg("x0") = std::optional<double>{}, py::arg("half_width") = 10.0,
      py::arg("points") = 4001, py::arg("adaptive") = true,
      "Run the construction pipeline; returns grid samples, states, and energies.");

  mod.def(
      "verify",
      [](const std::string& catalog, const std::string& expression, const Params& params,
         double epsilon, double epsilon1, std::optional<double> x0, double half_width,
         int points, bool adaptive, double eigenvalue_tol, double residual_tol,
         double gram_tol, int levels, bool richardson, unsigned seed) {
        const GeneratorSection g =
            make_section(catalog, expression, params, epsilon, epsilon1, x0);
        const QesModel m = build_from_section(g, Grid(half_width, points), adaptive);
        VerifyTolerances tol;
        tol.eigenvalue = eigenvalue_tol;
        tol.residual_max = residual_tol;
        tol.gram_offdiag = gram_tol;
        tol.levels = levels;
        tol.richardson = richardson;
        tol.seed = seed;
        return report_dict(verify_model(m, tol));
      },
      py::arg("catalog") = "", py::arg("expression") = "", py::arg("params") = Params{},
      py::arg("epsilon") = 1.0, py::arg("epsilon1") = 1.0,
      py::arg("x0") = std::optional<double>{}, py::arg("half_width") = 10.0,
      py::arg("points") = 4001, py::arg("adaptive") = true,
      py::arg("eigenvalue_tol") = 5e-4, py::arg("residual_tol") = 1e-5,
      py::arg("gram_tol") = 1e-6, py::arg("levels") = 3, py::arg("richardson") = true,
      py::arg("seed") = 42u,
      "Cross-check a model against the finite-difference oracle; returns the report.");

  mod.def("oscillator_chain_potential", &oscillator_chain_potential, py::arg("n"),
          py::arg("eps"), py::arg("x"),
          "Closed n-th widening of the harmonic well (structured member).");
  mod.def("oscillator_base_potential", &oscillator_base_potential, py::arg("n"),
          py::arg("eps"), py::arg("x"),
          "Plain member of the n-th harmonic widening: eps^2 x^2/2 + (2n - 1/2) eps.");
  mod.def("morse_chain_potential", &morse_chain_potential, py::arg("n"), py::arg("eps"),
          py::arg("x"),
          "Closed n-th widening of the exponential well; returns (structured, plain).");
}
