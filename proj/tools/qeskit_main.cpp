#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qeskit/chains.hpp"
#include "qeskit/io.hpp"
#include "qeskit/numerics.hpp"
#include "qeskit/solver.hpp"

namespace fs = std::filesystem;
using namespace qeskit;

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

Params parse_param_flags(const std::vector<std::string>& kvs) {
  Params out;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--param expects name=value, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("");
      out[key] = v;
    } catch (const std::exception&) {
      throw std::invalid_argument("--param " + key + ": '" + kv.substr(eq + 1) +
                                  "' is not a number");
    }
  }
  return out;
}

void write_out(const std::string& dir, const std::string& name, const std::string& content) {
  fs::path p = fs::path(dir) / name;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  atomic_write(p.string(), content);
  std::cout << "wrote " << p.string() << "\n";
}

// Flags shared by build/verify; a generator comes from exactly one source.
struct SourceFlags {
  std::string config;
  std::string catalog_name;
  std::string expression;
  std::vector<std::string> params;
  double epsilon = 1.0;
  double epsilon1 = 1.0;
  double x0 = 0.0;
  bool x0_set = false;

  std::string out_dir = ".";
  int grid_points = 0;     // 0 = keep config/default
  double half_width = 0.0; // 0 = keep config/default
  double tolerance = 0.0;  // 0 = keep config/default
  unsigned seed = 42;
  bool seed_set = false;
  bool force = false;
};

void add_source_options(CLI::App* cmd, SourceFlags& sf, bool with_force) {
  cmd->add_option("--config", sf.config, "JSON run configuration");
  cmd->add_option("--catalog", sf.catalog_name, "catalog entry name");
  cmd->add_option("--expression", sf.expression, "inline generator U(x)");
  cmd->add_option("--param", sf.params, "parameter binding name=value (repeatable)");
  cmd->add_option("--epsilon", sf.epsilon, "first level gap (expression source)");
  cmd->add_option("--epsilon1", sf.epsilon1, "second level gap (expression source)");
  cmd->add_option("--x0", sf.x0, "known zero of U (expression source)")
      ->each([&sf](const std::string&) { sf.x0_set = true; });
  cmd->add_option("--out", sf.out_dir, "output directory");
  cmd->add_option("--grid-points", sf.grid_points, "grid point count (odd)");
  cmd->add_option("--half-width", sf.half_width, "grid half width");
  cmd->add_option("--tolerance", sf.tolerance, "eigenvalue check tolerance");
  cmd->add_option("--seed", sf.seed, "random seed for inverse iteration")
      ->each([&sf](const std::string&) { sf.seed_set = true; });
  if (with_force) {
    cmd->add_flag("--force", sf.force, "build even when validation fails");
  }
}

RunConfig resolve_config(const SourceFlags& sf, bool need_source) {
  const int sources =
      (!sf.config.empty()) + (!sf.catalog_name.empty()) + (!sf.expression.empty());
  if (sources != 1) {
    if (!need_source && sources == 0) return RunConfig{};
    throw std::invalid_argument(
        "give exactly one generator source: --config, --catalog, or --expression");
  }
  RunConfig cfg;
  if (!sf.config.empty()) {
    cfg = load_run_config(sf.config);
  } else if (!sf.catalog_name.empty()) {
    cfg.generator.catalog_name = sf.catalog_name;
    cfg.generator.params = parse_param_flags(sf.params);
  } else {
    cfg.generator.expression = sf.expression;
    cfg.generator.params = parse_param_flags(sf.params);
    cfg.generator.epsilon = sf.epsilon;
    cfg.generator.epsilon1 = sf.epsilon1;
    if (sf.x0_set) cfg.generator.x0 = sf.x0;
  }
  if (sf.grid_points != 0 || sf.half_width != 0.0) {
    const double hw = sf.half_width != 0.0 ? sf.half_width : cfg.grid.half_width;
    const int pts = sf.grid_points != 0 ? sf.grid_points : cfg.grid.points;
    cfg.grid = Grid(hw, pts);
  }
  if (sf.tolerance != 0.0) {
    if (!(sf.tolerance > 0.0)) throw std::invalid_argument("--tolerance must be positive");
    cfg.tolerances.eigenvalue = sf.tolerance;
  }
  if (sf.seed_set) cfg.tolerances.seed = sf.seed;
  return cfg;
}

void print_validation(const ValidationReport& rep) {
  std::cout << "validation at x0 = " << fmt(rep.x0) << ":\n";
  for (const auto& c : rep.checks) {
    std::cout << "  [" << (c.pass ? "ok  " : "FAIL") << "] " << c.name
              << ": measured " << fmt(c.measured) << ", required " << fmt(c.required)
              << ", margin " << fmt(c.margin) << "\n";
  }
  for (const auto& d : rep.diagnostics) std::cout << "  note: " << d << "\n";
}

void print_model_summary(const QesModel& m) {
  std::cout << "model: " << m.description << "\n";
  std::cout << "grid: [" << fmt(-m.grid.half_width) << ", " << fmt(m.grid.half_width)
            << "] with " << m.grid.points << " points\n";
  std::cout << "energies: " << fmt(m.energies[0]) << ", " << fmt(m.energies[1]) << ", "
            << fmt(m.energies[2]) << " (bound states: " << m.bound_states << ")\n";
  if (m.continuum_edge) std::cout << "continuum edge: " << fmt(*m.continuum_edge) << "\n";
}

int cmd_catalog_list() {
  for (const auto& e : catalog_entries()) {
    std::cout << e.name << " - " << e.summary << "\n";
  }
  return 0;
}

int cmd_catalog_show(const std::string& name) {
  const CatalogEntry* entry = find_entry(name);
  if (entry == nullptr) throw std::invalid_argument("unknown catalog entry '" + name + "'");
  std::cout << entry->name << ": " << entry->summary << "\n";
  std::cout << "parameters:\n";
  for (const auto& p : entry->params) {
    std::cout << "  " << p.name << " = " << fmt(p.value) << "  (" << p.doc << ")\n";
  }
  std::cout << "constraints at the defaults:\n";
  for (const auto& c : check_constraints(name, {})) {
    std::cout << "  [" << (c.pass ? "ok  " : "FAIL") << "] " << c.name << ": " << c.detail
              << " (margin " << fmt(c.margin) << ")\n";
  }
  return 0;
}

int cmd_build(const SourceFlags& sf) {
  const RunConfig cfg = resolve_config(sf, true);
  const std::optional<GeneratorSpec> spec = generator_for_section(cfg.generator);
  if (spec) {
    const Interval scan{-cfg.grid.half_width, cfg.grid.half_width};
    const ValidationReport rep = validate_generator(*spec, scan);
    print_validation(rep);
    if (!rep.pass) {
      if (!sf.force) {
        std::cerr << "error: generator validation failed (use --force to build anyway)\n";
        return 3;
      }
      std::cout << "continuing despite validation failure (--force)\n";
    }
  } else {
    std::cout << "validation skipped: closed-form route without a generic generator "
                 "(reduced bound-state regime)\n";
  }
  const QesModel m = build_from_section(cfg.generator, cfg.grid, cfg.adaptive);
  print_model_summary(m);
  write_out(sf.out_dir, cfg.output.model, model_to_json(m, cfg.generator));
  write_out(sf.out_dir, cfg.output.csv, model_csv(m));
  return 0;
}

void print_report(const SpectrumReport& rep) {
  for (std::size_t i = 0; i < rep.level_checks.size(); ++i) {
    const auto& c = rep.level_checks[i];
    std::cout << "  level " << i << ": expected " << fmt(c.expected) << ", fd "
              << fmt(c.fd) << ", refined " << fmt(c.refined) << ", error "
              << fmt(c.error) << " [" << (c.pass ? "ok" : "FAIL") << "]\n";
  }
  std::cout << "  residuals:";
  for (double r : rep.residuals) std::cout << " " << fmt(r);
  std::cout << "\n  node counts:";
  for (int n : rep.node_counts) std::cout << " " << n;
  std::cout << "\n  gram: max off-diagonal " << fmt(rep.gram_max_offdiag)
            << ", max diagonal error " << fmt(rep.gram_max_diag_err) << "\n";
  for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
  std::cout << "verification " << (rep.pass ? "PASSED" : "FAILED") << "\n";
}

int cmd_verify(const SourceFlags& sf, const std::string& model_path) {
  RunConfig cfg;
  QesModel m;
  if (!model_path.empty()) {
    if (!sf.config.empty() || !sf.catalog_name.empty() || !sf.expression.empty()) {
      throw std::invalid_argument("--model cannot be combined with another source");
    }
    const StoredModel sm = model_from_json(read_file(model_path));
    cfg = resolve_config(sf, false);
    m = build_from_section(sm.generator, sm.grid, sm.adaptive);
  } else {
    cfg = resolve_config(sf, true);
    m = build_from_section(cfg.generator, cfg.grid, cfg.adaptive);
  }
  if (sf.tolerance != 0.0) cfg.tolerances.eigenvalue = sf.tolerance;
  if (sf.seed_set) cfg.tolerances.seed = sf.seed;
  std::cout << "verifying: " << m.description << " (bound states: " << m.bound_states
            << ")\n";
  const SpectrumReport rep = verify_model(m, cfg.tolerances);
  print_report(rep);
  write_out(sf.out_dir, cfg.output.report, report_to_json(rep, cfg.tolerances));
  return rep.pass ? 0 : 4;
}

std::vector<double> sample_samples(const std::function<double(double)>& f, double lo,
                                   double hi, int n) {
  std::vector<double> v((std::size_t)n);
  const double h = (hi - lo) / double(n - 1);
  for (int i = 0; i < n; ++i) v[(std::size_t)i] = f(lo + h * double(i));
  return v;
}

// Lowest k levels of the sampled potential, Richardson-extrapolated from the
// n-point and (2n-1)-point grids.
std::vector<double> fd_levels(const std::function<double(double)>& f, double lo, double hi,
                              int n, int k) {
  const double h = (hi - lo) / double(n - 1);
  const auto coarse = lowest_eigenvalues(discretize(sample_samples(f, lo, hi, n), h), k);
  const auto fine =
      lowest_eigenvalues(discretize(sample_samples(f, lo, hi, 2 * n - 1), h / 2.0), k);
  std::vector<double> out((std::size_t)k);
  for (int i = 0; i < k; ++i) {
    out[(std::size_t)i] =
        (4.0 * fine[(std::size_t)i] - coarse[(std::size_t)i]) / 3.0;
  }
  return out;
}

// Normalized zero mode exp(+int calw) sampled on [lo, hi]; works on
// asymmetric windows where the Grid type does not apply.
std::vector<double> chain_zero_mode(const SmoothFn& calw, double lo, double hi, int n) {
  const double h = (hi - lo) / double(n - 1);
  std::vector<double> w((std::size_t)n);
  for (int i = 0; i < n; ++i) w[(std::size_t)i] = calw(lo + h * double(i));
  const std::vector<double> cum = num::cumulative(w, h);
  const double mx = *std::max_element(cum.begin(), cum.end());
  std::vector<double> phi((std::size_t)n), p2((std::size_t)n);
  for (int i = 0; i < n; ++i) {
    phi[(std::size_t)i] = std::exp(cum[(std::size_t)i] - mx);
    p2[(std::size_t)i] = phi[(std::size_t)i] * phi[(std::size_t)i];
  }
  const double nrm = std::sqrt(num::simpson(p2, h));
  for (auto& p : phi) p /= nrm;
  return phi;
}

struct ChainArgs {
  std::string source;
  int steps = 1;
  double epsilon = 1.0;
  std::string out_dir = ".";
  int grid_points = 4001;
};

int cmd_chain(const ChainArgs& a) {
  if (a.steps < 0) throw std::invalid_argument("--steps must be >= 0");
  if (a.grid_points < 9 || a.grid_points % 2 == 0) {
    throw std::invalid_argument("--grid-points must be an odd count >= 9");
  }
  const bool closed_family = (a.source == "oscillator" || a.source == "morse");

  double lo = -10.0, hi = 10.0;
  if (a.source == "morse") {
    lo = -5.0;
    hi = 35.0;
  }

  std::vector<ChainStep> chain;
  std::string description = a.source;
  if (closed_family) {
    if (a.steps > 0) chain = iterate_chain(a.source, a.steps, a.epsilon);
  } else {
    // a built model supplies exactly one derivable step
    if (a.steps > 1) {
      throw std::invalid_argument(
          "a model-built source supports exactly one chain step; use --steps 1");
    }
    const StoredModel sm = model_from_json(read_file(a.source));
    const std::optional<GeneratorSpec> spec = generator_for_section(sm.generator);
    if (!spec) {
      throw std::invalid_argument(
          "this model has no generic generator route; chains need the full "
          "three-level construction");
    }
    lo = -sm.grid.half_width;
    hi = sm.grid.half_width;
    description = sm.description;
    if (a.steps == 1) {
      const WPlusPair pair = build_wplus_pair(*spec, sm.grid.half_width);
      chain.push_back(make_chain_step(build_supertriple(pair), Interval{lo, hi}));
    }
  }

  const int n = a.grid_points;
  const double h = (hi - lo) / double(n - 1);

  nlohmann::json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["kind"] = "chain_run";
  summary["source"] = description;
  if (closed_family) summary["epsilon"] = a.epsilon;
  summary["steps"] = a.steps;
  summary["grid"] = {{"lo", lo}, {"hi", hi}, {"points", n}};
  summary["step_reports"] = nlohmann::json::array();

  if (a.steps == 0) {
    // echo the source potential only
    std::function<double(double)> v0;
    if (a.source == "oscillator") {
      const double e = a.epsilon;
      v0 = [e](double x) { return 0.5 * (e * e * x * x - e); };
    } else if (a.source == "morse") {
      const double e = a.epsilon;
      v0 = [e](double x) { return morse_chain_potential(0, e, x).first; };
    } else {
      const StoredModel sm = model_from_json(read_file(a.source));
      const QesModel m = build_from_section(sm.generator, sm.grid, sm.adaptive);
      std::string csv = "x,V\n";
      for (int i = 0; i < m.grid.points; ++i) {
        csv += fmt17(m.grid.x(i)) + "," + fmt17(m.v[(std::size_t)i]) + "\n";
      }
      write_out(a.out_dir, "source.csv", csv);
      write_out(a.out_dir, "chain.json", summary.dump(2) + "\n");
      return 0;
    }
    std::string csv = "x,V\n";
    for (int i = 0; i < n; ++i) {
      const double x = lo + h * double(i);
      csv += fmt17(x) + "," + fmt17(v0(x)) + "\n";
    }
    write_out(a.out_dir, "source.csv", csv);
    write_out(a.out_dir, "chain.json", summary.dump(2) + "\n");
    return 0;
  }

  for (std::size_t k = 0; k < chain.size(); ++k) {
    const ChainStep& step = chain[k];
    const int kk = int(k) + 1;
    const std::vector<double> phi0 = chain_zero_mode(step.calw, lo, hi, n);

    const bool with_closed = closed_family && a.source == "oscillator";
    std::string csv = "x,v_plus,v_minus,calw,phi0";
    if (with_closed) csv += ",v_plus_closed";
    csv += "\n";
    double max_disc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lo + h * double(i);
      const double vp = step.v_plus(x);
      csv += fmt17(x) + "," + fmt17(vp) + "," + fmt17(step.v_minus(x)) + "," +
             fmt17(step.calw(x)) + "," + fmt17(phi0[(std::size_t)i]);
      if (with_closed) {
        const double closed = oscillator_chain_potential(kk, a.epsilon, x);
        max_disc = std::max(max_disc, std::abs(vp - closed));
        csv += "," + fmt17(closed);
      }
      csv += "\n";
    }

    const auto levels =
        fd_levels([&step](double x) { return step.v_plus(x); }, lo, hi, n, 4);

    const std::string file = "step_" + std::to_string(kk) + ".csv";
    write_out(a.out_dir, file, csv);

    nlohmann::json js;
    js["step"] = kk;
    js["epsilon0"] = step.source.epsilon;
    js["epsilon1"] = step.source.epsilon1;
    js["offset"] = step.offset;
    js["fd_levels"] = levels;
    js["csv"] = file;
    if (with_closed) js["max_closed_discrepancy"] = max_disc;
    summary["step_reports"].push_back(js);

    std::cout << "step " << kk << ": gaps (" << fmt(step.source.epsilon) << ", "
              << fmt(step.source.epsilon1) << "), offset " << fmt(step.offset)
              << ", fd levels";
    for (double e : levels) std::cout << " " << fmt(e);
    std::cout << "\n";
    if (with_closed) {
      std::cout << "  closed-form max discrepancy " << fmt(max_disc) << "\n";
    }
  }

  write_out(a.out_dir, "chain.json", summary.dump(2) + "\n");
  return 0;
}

struct ExportArgs {
  std::string model;
  std::string out_file = "export.csv";
  int grid_points = 0;
  double half_width = 0.0;
};

int cmd_export(const ExportArgs& a) {
  StoredModel sm = model_from_json(read_file(a.model));
  if (a.grid_points != 0 || a.half_width != 0.0) {
    const double hw = a.half_width != 0.0 ? a.half_width : sm.grid.half_width;
    const int pts = a.grid_points != 0 ? a.grid_points : sm.grid.points;
    sm.grid = Grid(hw, pts);
  }
  const QesModel m = build_from_section(sm.generator, sm.grid, sm.adaptive);
  fs::path p(a.out_file);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  atomic_write(p.string(), model_csv(m));
  std::cout << "wrote " << p.string() << " (" << m.grid.points << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qeskit: three-level quasi-exact wells, their partner pairs, and widening chains"};
  app.require_subcommand(1);

  auto* cat = app.add_subcommand("catalog", "browse the bundled generator catalog");
  cat->require_subcommand(1);
  cat->add_subcommand("list", "list entries");
  std::string show_name;
  auto* cat_show = cat->add_subcommand("show", "show one entry's schema and constraints");
  cat_show->add_option("name", show_name, "entry name")->required();

  SourceFlags build_sf;
  auto* build = app.add_subcommand("build", "construct a model and persist JSON + CSV");
  add_source_options(build, build_sf, true);

  SourceFlags verify_sf;
  std::string verify_model_path;
  auto* verify = app.add_subcommand("verify", "cross-check a model against the FD oracle");
  add_source_options(verify, verify_sf, false);
  verify->add_option("--model", verify_model_path, "stored model JSON to re-verify");

  ChainArgs chain_args;
  auto* chain = app.add_subcommand("chain", "run widening steps from a closed family or model");
  chain->add_option("source", chain_args.source, "oscillator | morse | model JSON path")
      ->required();
  chain->add_option("--steps", chain_args.steps, "number of widening steps (0 echoes the source)");
  chain->add_option("--epsilon", chain_args.epsilon, "level gap of the closed family");
  chain->add_option("--out", chain_args.out_dir, "output directory");
  chain->add_option("--grid-points", chain_args.grid_points, "sample count (odd)");

  ExportArgs export_args;
  auto* exp = app.add_subcommand("export", "rebuild a stored model and emit its CSV");
  exp->add_option("--model", export_args.model, "stored model JSON")->required();
  exp->add_option("--out", export_args.out_file, "CSV destination");
  exp->add_option("--grid-points", export_args.grid_points, "override point count (odd)");
  exp->add_option("--half-width", export_args.half_width, "override half width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cat->parsed()) {
      if (cat_show->parsed()) return cmd_catalog_show(show_name);
      return cmd_catalog_list();
    }
    if (build->parsed()) return cmd_build(build_sf);
    if (verify->parsed()) return cmd_verify(verify_sf, verify_model_path);
    if (chain->parsed()) return cmd_chain(chain_args);
    if (exp->parsed()) return cmd_export(export_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_constraint_violation(e.what()) ? 3 : 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
