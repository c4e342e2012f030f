#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeskit/catalog.hpp"
#include "qeskit/grid.hpp"
#include "qeskit/solver.hpp"
#include "qeskit/states.hpp"

namespace qeskit {

inline constexpr int kSchemaVersion = 1;

// Generator source for a run: exactly one of `catalog_name` / `expression`.
struct GeneratorSection {
  std::optional<std::string> catalog_name;
  std::optional<std::string> expression;
  Params params;          // catalog parameter overrides, or expression bindings
  double epsilon = 1.0;   // expression route; catalog entries carry their own gaps
  double epsilon1 = 1.0;
  std::optional<double> x0;  // expression route hint for the generator zero
};

struct OutputSection {
  std::string model = "model.json";
  std::string csv = "model.csv";
  std::string report = "report.json";
};

struct RunConfig {
  GeneratorSection generator;
  Grid grid{10.0, 4001};
  bool adaptive = true;
  VerifyTolerances tolerances;
  OutputSection output;
};

// Parses and validates a config document. Throws std::invalid_argument with a
// descriptive message on schema problems (wrong types, both or neither
// generator source, non-positive tolerances, unsupported schema_version).
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Builds the model a generator section describes: catalog dispatch (case3
// goes through its closed-form factory, which also covers the reduced
// bound-state regimes) or expression parse + construction pipeline.
QesModel build_from_section(const GeneratorSection& gen, Grid grid, bool adaptive);

// The GeneratorSpec for a section, for validation reporting. Not available
// for the case3 closed-form route when eps1 <= 0 (no admissible generator).
std::optional<GeneratorSpec> generator_for_section(const GeneratorSection& gen);

std::string model_to_json(const QesModel& m, const GeneratorSection& gen);

struct StoredModel {
  GeneratorSection generator;
  Grid grid{10.0, 4001};
  bool adaptive = true;
  std::array<double, 3> energies{0.0, 0.0, 0.0};
  int bound_states = 3;
  std::optional<double> continuum_edge;
  std::string description;
};
// Throws std::invalid_argument on malformed or wrongly-versioned documents.
StoredModel model_from_json(const std::string& text);

// Grid samples as CSV: header `x,V,psi0,psi1,psi2`, columns for absent
// states omitted, 17 significant digits.
std::string model_csv(const QesModel& m);
// Parsed columns in header order. Throws std::invalid_argument on ragged
// rows or non-numeric fields.
std::vector<std::pair<std::string, std::vector<double>>> parse_csv(const std::string& text);

std::string report_to_json(const SpectrumReport& r, const VerifyTolerances& tol);

std::string read_file(const std::string& path);  // throws std::invalid_argument if unreadable
void atomic_write(const std::string& path, const std::string& content);

// True when the message marks a parameter-region rejection rather than a
// usage or schema problem (drives the process exit code).
bool is_constraint_violation(const std::string& message);

}  // namespace qeskit
