#include "qeskit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qeskit {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw std::invalid_argument("config schema: " + what);
}

double require_number(const json& j, const std::string& key, double fallback,
                      bool* present = nullptr) {
  if (!j.contains(key)) {
    if (present != nullptr) *present = false;
    return fallback;
  }
  if (present != nullptr) *present = true;
  if (!j.at(key).is_number()) schema_error("'" + key + "' must be a number");
  return j.at(key).get<double>();
}

Params params_from(const json& j, const std::string& key) {
  Params out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_object()) schema_error("'" + key + "' must be an object of numbers");
  for (const auto& [k, v] : j.at(key).items()) {
    if (!v.is_number()) schema_error("parameter '" + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

GeneratorSection generator_from_json(const json& g) {
  GeneratorSection out;
  if (!g.is_object()) schema_error("'generator' must be an object");
  if (g.contains("catalog")) {
    if (!g.at("catalog").is_string()) schema_error("'catalog' must be a string");
    out.catalog_name = g.at("catalog").get<std::string>();
  }
  if (g.contains("expression")) {
    if (!g.at("expression").is_string()) schema_error("'expression' must be a string");
    out.expression = g.at("expression").get<std::string>();
  }
  if (out.catalog_name.has_value() == out.expression.has_value()) {
    schema_error("generator needs exactly one of 'catalog' or 'expression'");
  }
  out.params = params_from(g, "params");
  out.epsilon = require_number(g, "epsilon", 1.0);
  out.epsilon1 = require_number(g, "epsilon1", 1.0);
  bool has_x0 = false;
  const double x0 = require_number(g, "x0", 0.0, &has_x0);
  if (has_x0) out.x0 = x0;
  return out;
}

json generator_to_json(const GeneratorSection& g) {
  json out;
  if (g.catalog_name) out["catalog"] = *g.catalog_name;
  if (g.expression) {
    out["expression"] = *g.expression;
    out["epsilon"] = g.epsilon;
    out["epsilon1"] = g.epsilon1;
    if (g.x0) out["x0"] = *g.x0;
  }
  if (!g.params.empty()) {
    json p = json::object();
    for (const auto& [k, v] : g.params) p[k] = v;
    out["params"] = p;
  }
  return out;
}

void check_version(const json& j, const char* what) {
  if (!j.contains("schema_version")) return;  // absent means current
  if (!j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument(std::string(what) + ": unsupported schema_version");
  }
}

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Params merged_entry_params(const std::string& name, const Params& overrides) {
  const CatalogEntry* entry = find_entry(name);
  if (entry == nullptr) throw std::invalid_argument("unknown catalog entry '" + name + "'");
  Params p;
  for (const auto& ps : entry->params) p[ps.name] = ps.value;
  for (const auto& [k, v] : overrides) {
    if (p.find(k) == p.end()) {
      throw std::invalid_argument("catalog entry '" + name + "' has no parameter '" + k + "'");
    }
    p[k] = v;
  }
  return p;
}

GeneratorSpec spec_from_expression(const GeneratorSection& g) {
  std::vector<std::string> names;
  names.reserve(g.params.size());
  for (const auto& [k, v] : g.params) names.push_back(k);
  GeneratorSpec spec;
  spec.u = Expr::parse(*g.expression, names);
  spec.params = g.params;
  spec.epsilon = g.epsilon;
  spec.epsilon1 = g.epsilon1;
  spec.x0 = g.x0;
  return spec;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("top level must be an object");
  check_version(j, "config");
  if (!j.contains("generator")) schema_error("missing 'generator' section");

  RunConfig cfg;
  cfg.generator = generator_from_json(j.at("generator"));

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_object()) schema_error("'grid' must be an object");
    const double hw = require_number(g, "half_width", cfg.grid.half_width);
    const int pts = static_cast<int>(require_number(g, "points", cfg.grid.points));
    cfg.grid = Grid(hw, pts);  // the constructor enforces L > 0 and odd points
    if (g.contains("adaptive")) {
      if (!g.at("adaptive").is_boolean()) schema_error("'adaptive' must be a boolean");
      cfg.adaptive = g.at("adaptive").get<bool>();
    }
  }

  if (j.contains("verification")) {
    const json& v = j.at("verification");
    if (!v.is_object()) schema_error("'verification' must be an object");
    cfg.tolerances.eigenvalue = require_number(v, "eigenvalue_tol", cfg.tolerances.eigenvalue);
    cfg.tolerances.residual_max = require_number(v, "residual_tol", cfg.tolerances.residual_max);
    cfg.tolerances.gram_offdiag = require_number(v, "gram_tol", cfg.tolerances.gram_offdiag);
    cfg.tolerances.levels = static_cast<int>(require_number(v, "levels", cfg.tolerances.levels));
    if (v.contains("richardson")) {
      if (!v.at("richardson").is_boolean()) schema_error("'richardson' must be a boolean");
      cfg.tolerances.richardson = v.at("richardson").get<bool>();
    }
    cfg.tolerances.seed =
        static_cast<unsigned>(require_number(v, "seed", cfg.tolerances.seed));
    if (!(cfg.tolerances.eigenvalue > 0.0) || !(cfg.tolerances.residual_max > 0.0) ||
        !(cfg.tolerances.gram_offdiag > 0.0)) {
      schema_error("tolerances must be positive");
    }
    if (cfg.tolerances.levels < 1 || cfg.tolerances.levels > 3) {
      schema_error("'levels' must be 1, 2, or 3");
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) schema_error("'output' must be an object");
    auto str = [&o](const char* key, std::string fallback) {
      if (!o.contains(key)) return fallback;
      if (!o.at(key).is_string()) schema_error(std::string("'") + key + "' must be a string");
      return o.at(key).get<std::string>();
    };
    cfg.output.model = str("model", cfg.output.model);
    cfg.output.csv = str("csv", cfg.output.csv);
    cfg.output.report = str("report", cfg.output.report);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_file(path));
}

QesModel build_from_section(const GeneratorSection& gen, Grid grid, bool adaptive) {
  if (gen.catalog_name) {
    const std::string& name = *gen.catalog_name;
    if (name == "case3") {
      // Closed-form factory: also valid in the reduced bound-state regimes
      // (alpha <= 1), which the generic three-level gate would reject.
      const Params p = merged_entry_params(name, gen.params);
      const double b = p.at("b"), eps1 = p.at("eps1");
      if (!(b * b > 0.0)) {
        throw std::invalid_argument(
            "catalog entry 'case3': constraint violated: b must be nonzero");
      }
      const double alpha = 1.0 + 2.0 * eps1 / (b * b);
      if (!(alpha > 0.0)) {
        std::ostringstream os;
        os << "catalog entry 'case3': constraint violated: alpha = 1 + 2*eps1/b^2 must be "
              "positive (alpha = "
           << alpha << ")";
        throw std::invalid_argument(os.str());
      }
      return case3_model(b, eps1);
    }
    const EntryInstance inst = instantiate(name, gen.params);
    return model_from_entry(inst, grid, adaptive);
  }
  if (gen.expression) {
    return build_model(spec_from_expression(gen), grid, adaptive);
  }
  throw std::invalid_argument("generator section needs 'catalog' or 'expression'");
}

std::optional<GeneratorSpec> generator_for_section(const GeneratorSection& gen) {
  if (gen.catalog_name) {
    if (*gen.catalog_name == "case3") {
      const Params p = merged_entry_params("case3", gen.params);
      if (!(p.at("eps1") > 0.0)) return std::nullopt;
    }
    return instantiate(*gen.catalog_name, gen.params).gen;
  }
  if (gen.expression) return spec_from_expression(gen);
  throw std::invalid_argument("generator section needs 'catalog' or 'expression'");
}

std::string model_to_json(const QesModel& m, const GeneratorSection& gen) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "qes_model";
  j["description"] = m.description;
  j["generator"] = generator_to_json(gen);
  j["grid"] = {{"half_width", m.grid.half_width}, {"points", m.grid.points}};
  j["adaptive"] = false;  // the stored grid is already the widened one
  j["epsilon"] = m.epsilon;
  j["epsilon1"] = m.epsilon1;
  j["energies"] = m.energies;
  j["bound_states"] = m.bound_states;
  if (m.continuum_edge) j["continuum_edge"] = *m.continuum_edge;
  return j.dump(2) + "\n";
}

StoredModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string() ||
      j.at("kind").get<std::string>() != "qes_model") {
    throw std::invalid_argument("model schema: not a qes_model document");
  }
  check_version(j, "model");
  if (!j.contains("generator")) throw std::invalid_argument("model schema: missing 'generator'");

  StoredModel sm;
  sm.generator = generator_from_json(j.at("generator"));
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    const double hw = require_number(g, "half_width", sm.grid.half_width);
    const int pts = static_cast<int>(require_number(g, "points", sm.grid.points));
    sm.grid = Grid(hw, pts);
  }
  if (j.contains("adaptive") && j.at("adaptive").is_boolean()) {
    sm.adaptive = j.at("adaptive").get<bool>();
  }
  if (j.contains("energies")) {
    const json& e = j.at("energies");
    if (!e.is_array() || e.size() != 3) {
      throw std::invalid_argument("model schema: 'energies' must hold three numbers");
    }
    for (int i = 0; i < 3; ++i) {
      if (!e[i].is_number()) {
        throw std::invalid_argument("model schema: 'energies' must hold three numbers");
      }
      sm.energies[(std::size_t)i] = e[i].get<double>();
    }
  }
  sm.bound_states = static_cast<int>(require_number(j, "bound_states", 3.0));
  bool has_edge = false;
  const double edge = require_number(j, "continuum_edge", 0.0, &has_edge);
  if (has_edge) sm.continuum_edge = edge;
  if (j.contains("description") && j.at("description").is_string()) {
    sm.description = j.at("description").get<std::string>();
  }
  return sm;
}

std::string model_csv(const QesModel& m) {
  const std::vector<const std::vector<double>*> states = {&m.psi0, &m.psi1, &m.psi2};
  std::string header = "x,V";
  int nstates = 0;
  for (int s = 0; s < 3; ++s) {
    if (states[(std::size_t)s]->empty()) break;
    header += ",psi" + std::to_string(s);
    ++nstates;
  }
  std::string out = header + "\n";
  for (int i = 0; i < m.grid.points; ++i) {
    out += format17(m.grid.x(i));
    out += ',';
    out += format17(m.v[(std::size_t)i]);
    for (int s = 0; s < nstates; ++s) {
      out += ',';
      out += format17((*states[(std::size_t)s])[(std::size_t)i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<double>>> parse_csv(const std::string& text) {
  std::vector<std::pair<std::string, std::vector<double>>> cols;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty document");
  std::istringstream hs(line);
  std::string field;
  while (std::getline(hs, field, ',')) cols.emplace_back(field, std::vector<double>{});
  if (cols.empty()) throw std::invalid_argument("csv: empty header");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, field, ',')) {
      if (c >= cols.size()) break;
      try {
        cols[c].second.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw std::invalid_argument("csv: non-numeric field in row " + std::to_string(row));
      }
      ++c;
    }
    if (c != cols.size()) {
      throw std::invalid_argument("csv: row " + std::to_string(row) + " has " +
                                  std::to_string(c) + " fields, expected " +
                                  std::to_string(cols.size()));
    }
    ++row;
  }
  return cols;
}

std::string report_to_json(const SpectrumReport& r, const VerifyTolerances& tol) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "spectrum_report";
  j["pass"] = r.pass;
  j["levels"] = r.levels;
  j["eigenvalues"] = r.eigenvalues;
  j["eigenvalues_fine"] = r.eigenvalues_fine;
  j["refined"] = r.refined;
  json checks = json::array();
  for (const auto& c : r.level_checks) {
    checks.push_back({{"expected", c.expected},
                      {"fd", c.fd},
                      {"refined", c.refined},
                      {"error", c.error},
                      {"pass", c.pass}});
  }
  j["level_checks"] = checks;
  j["residuals"] = r.residuals;
  j["node_counts"] = r.node_counts;
  j["gram_max_offdiag"] = r.gram_max_offdiag;
  j["gram_max_diag_err"] = r.gram_max_diag_err;
  j["notes"] = r.notes;
  j["tolerances"] = {{"eigenvalue_tol", tol.eigenvalue},
                     {"residual_tol", tol.residual_max},
                     {"gram_tol", tol.gram_offdiag},
                     {"levels", tol.levels},
                     {"richardson", tol.richardson},
                     {"seed", tol.seed}};
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw std::invalid_argument("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::invalid_argument("cannot move '" + tmp + "' into place");
  }
}

bool is_constraint_violation(const std::string& message) {
  return message.find("constraint violated") != std::string::npos;
}

}  // namespace qeskit
