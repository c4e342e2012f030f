#include "qeskit/catalog.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qeskit {

namespace {

std::vector<CatalogEntry> make_entries() {
  return {
      {"case1",
       "rational single well with explicit potential and three eigenfunctions",
       {{"c", 1.0, "width scale; the well is c^2*(...) in c*x"}}},
      {"case2",
       "rational single well whose potential coincides with the first oscillator partner",
       {{"b", 1.0, "width scale of the rational profile"}}},
      {"case3",
       "saturating rational well of finite depth with explicit eigenfunctions",
       {{"b", 1.0, "width scale of the rational profile"},
        {"eps1", 1.0, "second gap; sets alpha = 1 + 2*eps1/b^2"}}},
      {"oscillator",
       "harmonic well, the equal-gap limit of the rational family",
       {{"epsilon", 1.0, "common level spacing"}}},
      {"rosen_morse",
       "tanh-squared generator, hyperbolic well with a continuum edge",
       {{"epsilon", 3.0, "first gap; the second gap is epsilon - 1"}}},
      {"razavy",
       "sinh-squared generator, confining hyperbolic well",
       {{"epsilon", 1.0, "first gap; the second gap is epsilon + 1/2"}}},
  };
}

Params merge_params(const CatalogEntry& entry, const Params& given) {
  Params full;
  for (const auto& ps : entry.params) full[ps.name] = ps.value;
  for (const auto& [key, value] : given) {
    auto it = full.find(key);
    if (it == full.end()) {
      throw std::invalid_argument("unknown parameter '" + key + "' for catalog entry '" +
                                  entry.name + "'");
    }
    it->second = value;
  }
  return full;
}

ConstraintResult positivity(const std::string& name, double value, const std::string& detail) {
  return {name, value > 0.0, value, detail};
}

struct Case3Params {
  double b2, alpha, aa, q1, q2, q3, q4, k0, k1, k2;
};

Case3Params case3_derived(double b, double eps1) {
  Case3Params p{};
  p.b2 = b * b;
  if (!(p.b2 > 0.0)) throw std::invalid_argument("case3: b must be nonzero");
  p.alpha = 1.0 + 2.0 * eps1 / p.b2;
  if (!(p.alpha > 0.0)) {
    throw std::invalid_argument("case3: alpha = 1 + 2*eps1/b^2 must be positive");
  }
  const double a = p.alpha;
  p.aa = a * (a + 1.0);
  const double s = a * a + a + 1.0;
  p.q1 = (a * a + 3.0 * a + 1.0) * (a * a + 3.0 * a + 1.0) / (8.0 * p.aa);
  p.q2 = a * a + a - 1.0;
  p.q3 = s * s * s / (8.0 * p.aa);
  p.q4 = s * s / 4.0;
  p.k0 = 0.5 * (1.0 + 1.0 / a + 1.0 / (a + 1.0));
  p.k1 = 0.5 * (1.0 - 1.0 / a + 1.0 / (a + 1.0));
  p.k2 = 0.5 * (1.0 - 1.0 / a - 1.0 / (a + 1.0));
  return p;
}

std::vector<double> sample_expr(const Expr& e, const Params& params, const Grid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i) {
    out[static_cast<std::size_t>(i)] =
        static_cast<double>(e.evaluate_ld(static_cast<long double>(grid.x(i)), params));
  }
  return out;
}

bool tail_below(const std::vector<double>& psi, double rel) {
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::fabs(v));
  if (peak <= 0.0) return false;
  const std::size_t n = psi.size();
  const std::size_t k = std::max<std::size_t>(1, n / 20);
  double outer = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    outer = std::max(outer, std::fabs(psi[i]));
    outer = std::max(outer, std::fabs(psi[n - 1 - i]));
  }
  return outer < rel * peak;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = make_entries();
  return entries;
}

const CatalogEntry* find_entry(const std::string& name) {
  for (const auto& e : catalog_entries()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

GeneratorSpec rational_generator(double eps, double eps1, double b2) {
  GeneratorSpec g;
  g.epsilon = eps;
  g.epsilon1 = eps1;
  const double a2 = b2 + 2.0 / 3.0 * (eps1 - eps);
  g.params = {{"e", eps}, {"e1", eps1}, {"a2", a2}, {"b2", b2}};
  g.u = Expr::parse("4*e*e1*x^2*(1+a2*x^2)/(1+b2*x^2)", {"e", "e1", "a2", "b2"});
  g.x0 = 0.0;
  return g;
}

std::vector<ConstraintResult> rational_family_constraints(double eps, double eps1, double b2) {
  std::vector<ConstraintResult> out;
  out.push_back(positivity("first gap positive", eps, "eps > 0"));
  out.push_back(positivity("second gap positive", eps1, "eps1 > 0"));
  out.push_back(positivity("width parameter positive", b2, "b2 > 0"));
  if (b2 > 0.0) {
    const double p = eps / b2;
    const double q = eps1 / b2;
    const double a2 = b2 + 2.0 / 3.0 * (eps1 - eps);
    out.push_back({"a2 nonnegative", a2 >= 0.0, a2,
                   "a2 = b2 + 2/3*(eps1 - eps) >= 0, i.e. eps1/b2 >= eps/b2 - 3/2"});
    const double disc = 25.0 - 60.0 * p + 68.0 * p * p;
    const double q_hi = 3.25 * p - 1.875 + 0.375 * std::sqrt(disc);
    std::ostringstream os;
    os << "U6 inequality: eps1/b2 <= 13p/4 - 15/8 + 3/8*sqrt(25 - 60p + 68p^2) = " << q_hi
       << " at p = eps/b2 = " << p;
    out.push_back({"U6 inequality", q <= q_hi, q_hi - q, os.str()});
  }
  return out;
}

std::vector<ConstraintResult> check_constraints(const std::string& name, const Params& params) {
  const CatalogEntry* entry = find_entry(name);
  if (entry == nullptr) throw std::invalid_argument("unknown catalog entry '" + name + "'");
  const Params p = merge_params(*entry, params);
  std::vector<ConstraintResult> out;
  auto family = [&out](double eps, double eps1, double b2) {
    for (auto& c : rational_family_constraints(eps, eps1, b2)) out.push_back(std::move(c));
  };
  if (name == "case1") {
    const double c = p.at("c");
    out.push_back({"c nonzero", c != 0.0, std::fabs(c), "c != 0"});
    if (c != 0.0) {
      const double b2 = (2.0 - std::sqrt(3.0)) * c * c;
      family(1.5 * b2, (1.5 + std::sqrt(3.0)) * b2, b2);
    }
  } else if (name == "case2") {
    const double b = p.at("b");
    out.push_back({"b nonzero", b != 0.0, std::fabs(b), "b != 0"});
    if (b != 0.0) family(1.5 * b * b, 0.5 * b * b, b * b);
  } else if (name == "case3") {
    const double b = p.at("b");
    const double eps1 = p.at("eps1");
    out.push_back({"b nonzero", b != 0.0, std::fabs(b), "b != 0"});
    out.push_back(positivity("second gap positive", eps1, "eps1 > 0"));
    if (b != 0.0) family(eps1 + 1.5 * b * b, eps1, b * b);
  } else if (name == "oscillator") {
    out.push_back(positivity("epsilon positive", p.at("epsilon"), "epsilon > 0"));
  } else if (name == "rosen_morse") {
    const double e = p.at("epsilon");
    out.push_back({"epsilon above one", e > 1.0, e - 1.0,
                   "epsilon > 1 keeps the second gap epsilon - 1 positive"});
  } else if (name == "razavy") {
    out.push_back(positivity("epsilon positive", p.at("epsilon"), "epsilon > 0"));
  }
  return out;
}

ClosedForms case3_closed_forms(double b, double eps1) {
  const Case3Params cp = case3_derived(b, eps1);
  ClosedForms cf;
  cf.params = {{"b2", cp.b2}, {"aa", cp.aa}, {"al", cp.alpha}, {"q1", cp.q1},
               {"q2", cp.q2}, {"q3", cp.q3}, {"q4", cp.q4},   {"k0", cp.k0},
               {"k1", cp.k1}, {"k2", cp.k2}};
  const std::vector<std::string> names = {"b2", "aa", "al", "q1", "q2",
                                          "q3", "q4", "k0", "k1", "k2"};
  const std::string rho = "sqrt(1+aa*(1+b2*x^2))";
  cf.v = Expr::parse("b2*(q1 + 1/(1+b2*x^2) - 2/(1+b2*x^2)^2 - 2/(" + rho +
                         "*(1+b2*x^2)^2) - q2/(" + rho + "*(1+b2*x^2)) - q3/" + rho + "^2 + q4/" +
                         rho + "^3)",
                     names);
  cf.psi.push_back(Expr::parse("(" + rho + "+al)/(" + rho + "-1)*exp(-k0*" + rho + ")", names));
  cf.psi.push_back(Expr::parse("x/(" + rho + "-1)*exp(-k1*" + rho + ")", names));
  cf.psi.push_back(
      Expr::parse("(" + rho + "-al-1)/(" + rho + "-1)*exp(-k2*" + rho + ")", names));
  return cf;
}

int case3_bound_state_count(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("case3_bound_state_count: alpha must be positive");
  if (alpha * alpha - alpha - 1.0 > 0.0) return 3;  // alpha > (1+sqrt(5))/2
  if (alpha * alpha + alpha - 1.0 > 0.0) return 2;  // alpha > (sqrt(5)-1)/2
  return 1;
}

EntryInstance instantiate(const std::string& name, const Params& params) {
  const CatalogEntry* entry = find_entry(name);
  if (entry == nullptr) throw std::invalid_argument("unknown catalog entry '" + name + "'");
  const Params p = merge_params(*entry, params);
  for (const auto& c : check_constraints(name, params)) {
    if (!c.pass) {
      std::ostringstream os;
      os << "catalog entry '" << name << "': constraint violated: " << c.detail << " (margin "
         << c.margin << ")";
      throw std::invalid_argument(os.str());
    }
  }

  EntryInstance inst;
  inst.name = name;
  inst.summary = entry->summary;

  const double s3 = std::sqrt(3.0);
  if (name == "case1") {
    const double c = p.at("c");
    const double c2 = c * c;
    const double b2 = (2.0 - s3) * c2;
    inst.gen = rational_generator(1.5 * b2, (1.5 + s3) * b2, b2);
    ClosedForms cf;
    cf.params = {{"c2", c2}, {"s3", s3}, {"p0", (3.0 - s3) / 2.0}, {"p1", (s3 - 1.0) / 2.0}};
    const std::vector<std::string> names = {"c2", "s3", "p0", "p1"};
    cf.v = Expr::parse(
        "c2*(3*c2*x^2/8 + (3-s3)/(1+c2*x^2) + (2*s3-3)/(1+c2*x^2)^2 - 7*s3/4 + 3/2)", names);
    cf.psi.push_back(Expr::parse("exp(-s3*c2*x^2/4 + p0*log(1+c2*x^2))", names));
    cf.psi.push_back(Expr::parse("x*exp(-s3*c2*x^2/4 + p1*log(1+c2*x^2))", names));
    cf.psi.push_back(Expr::parse("(1-c2*x^2)*exp(-s3*c2*x^2/4 + p1*log(1+c2*x^2))", names));
    inst.closed = std::move(cf);
    inst.energies = {0.0, inst.gen.epsilon, inst.gen.epsilon + inst.gen.epsilon1};
  } else if (name == "case2") {
    const double b = p.at("b");
    const double b2 = b * b;
    inst.gen = rational_generator(1.5 * b2, 0.5 * b2, b2);
    ClosedForms cf;
    cf.params = {{"b2", b2}};
    cf.v = Expr::parse("3*b2/4 + b2^2*x^2/8 - 4*b2/(1+b2*x^2)^2 + 2*b2/(1+b2*x^2)", {"b2"});
    inst.closed = std::move(cf);
    inst.energies = {0.0, 1.5 * b2, 2.0 * b2};
  } else if (name == "case3") {
    const double b = p.at("b");
    const double eps1 = p.at("eps1");
    const Case3Params cp = case3_derived(b, eps1);
    inst.gen = rational_generator(eps1 + 1.5 * cp.b2, eps1, cp.b2);
    inst.closed = case3_closed_forms(b, eps1);
    inst.energies = {0.0, eps1 + 1.5 * cp.b2, 2.0 * eps1 + 1.5 * cp.b2};
    inst.continuum_edge = cp.b2 * cp.q1;
    inst.bound_states = case3_bound_state_count(cp.alpha);
  } else if (name == "oscillator") {
    const double e = p.at("epsilon");
    inst.gen.epsilon = e;
    inst.gen.epsilon1 = e;
    inst.gen.params = {{"e", e}};
    inst.gen.u = Expr::parse("4*e^2*x^2", {"e"});
    inst.gen.x0 = 0.0;
    ClosedForms cf;
    cf.params = {{"e", e}};
    cf.v = Expr::parse("(e^2*x^2 - e)/2", {"e"});
    cf.psi.push_back(Expr::parse("exp(-e*x^2/2)", {"e"}));
    cf.psi.push_back(Expr::parse("x*exp(-e*x^2/2)", {"e"}));
    cf.psi.push_back(Expr::parse("(2*e*x^2-1)*exp(-e*x^2/2)", {"e"}));
    inst.closed = std::move(cf);
    inst.energies = {0.0, e, 2.0 * e};
  } else if (name == "rosen_morse") {
    const double e = p.at("epsilon");
    inst.gen.epsilon = e;
    inst.gen.epsilon1 = e - 1.0;
    inst.gen.params = {{"e", e}, {"e1", e - 1.0}};
    inst.gen.u = Expr::parse("4*e*e1*tanh(x)^2", {"e", "e1"});
    inst.gen.x0 = 0.0;
    inst.energies = {0.0, e, 2.0 * e - 1.0};
    const double edge = 0.5 * (e + 0.5) * (e + 0.5);
    inst.continuum_edge = edge;
    inst.bound_states = 0;
    for (double level : inst.energies) {
      if (level < edge) ++inst.bound_states;
    }
  } else if (name == "razavy") {
    const double e = p.at("epsilon");
    inst.gen.epsilon = e;
    inst.gen.epsilon1 = e + 0.5;
    inst.gen.params = {{"e", e}, {"e1", e + 0.5}};
    inst.gen.u = Expr::parse("4*e*e1*sinh(x)^2", {"e", "e1"});
    inst.gen.x0 = 0.0;
    inst.energies = {0.0, e, 2.0 * e + 0.5};
  }
  return inst;
}

QesModel case3_model(double b, double eps1) {
  const Case3Params cp = case3_derived(b, eps1);
  const int nb = case3_bound_state_count(cp.alpha);
  const ClosedForms cf = case3_closed_forms(b, eps1);

  double half = 10.0;
  int points = 4001;
  for (int attempt = 0;; ++attempt) {
    const Grid grid(half, points);
    std::vector<std::vector<double>> psis;
    bool ok = true;
    for (int n = 0; n < nb; ++n) {
      std::vector<double> psi =
          normalize_state(sample_expr(cf.psi[static_cast<std::size_t>(n)], cf.params, grid),
                          grid.h());
      if (!tail_below(psi, 1e-10)) ok = false;
      psis.push_back(std::move(psi));
    }
    if (ok) {
      QesModel m;
      m.grid = grid;
      m.v = sample_expr(*cf.v, cf.params, grid);
      if (nb > 0) m.psi0 = std::move(psis[0]);
      if (nb > 1) m.psi1 = std::move(psis[1]);
      if (nb > 2) m.psi2 = std::move(psis[2]);
      m.energies = {0.0, eps1 + 1.5 * cp.b2, 2.0 * eps1 + 1.5 * cp.b2};
      m.epsilon = eps1 + 1.5 * cp.b2;
      m.epsilon1 = eps1;
      m.continuum_edge = cp.b2 * cp.q1;
      m.bound_states = nb;
      m.params = {{"b", b}, {"eps1", eps1}};
      m.description = "case3 closed-form model, alpha = " + std::to_string(cp.alpha);
      return m;
    }
    if (attempt == 4) {
      throw std::runtime_error(
          "case3_model: bound states still reach the grid boundary after widening 16-fold");
    }
    half *= 2.0;
    points = 2 * points - 1;  // keep the spacing as the box widens
  }
}

QesModel model_from_entry(const EntryInstance& inst, Grid grid, bool adaptive) {
  QesModel m = build_model(inst.gen, grid, adaptive);
  m.continuum_edge = inst.continuum_edge;
  m.bound_states = inst.bound_states;
  m.description = inst.name;
  return m;
}

}  // namespace qeskit
