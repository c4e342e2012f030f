#include "qeskit/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qeskit/numerics.hpp"

namespace qeskit {

namespace {

std::vector<long double> sample_values(const SmoothFn& f, const Grid& grid) {
  std::vector<long double> out((std::size_t)grid.points);
  for (int i = 0; i < grid.points; ++i) out[(std::size_t)i] = f.jet((long double)grid.x(i))[0];
  return out;
}

// psi_i = pref_i * exp(expo_i - max(expo)), as doubles.
std::vector<double> assemble(const std::vector<long double>& pref,
                             const std::vector<long double>& expo) {
  long double m = expo[0];
  for (long double e : expo) m = std::max(m, e);
  std::vector<double> psi(expo.size());
  for (std::size_t i = 0; i < expo.size(); ++i)
    psi[i] = (double)(pref[i] * std::exp(expo[i] - m));
  return psi;
}

void check_tail(const std::vector<double>& psi, const char* label) {
  double outer = tail_mass_fraction(psi, 0.10);
  double band = tail_mass_fraction(psi, 0.20) - outer;
  if (outer > 1e-6 && outer >= band)
    throw std::runtime_error(std::string(label) +
                             " is not square-integrable: outer-10% mass fraction " +
                             std::to_string(outer) + " grows toward the boundary");
}

}  // namespace

std::vector<double> normalize_state(std::vector<double> psi, double h) {
  std::vector<long double> sq(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    sq[i] = (long double)psi[i] * (long double)psi[i];
  long double n2 = num::simpson(sq, (long double)h);
  if (!(n2 > 0.0L)) throw std::runtime_error("normalize_state: vanishing norm");
  double scale = (double)(1.0L / std::sqrt(n2));

  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::fabs(v));
  for (std::size_t i = psi.size(); i-- > 0;) {
    if (std::fabs(psi[i]) > 1e-6 * peak) {
      if (psi[i] < 0.0) scale = -scale;
      break;
    }
  }
  for (double& v : psi) v *= scale;
  return psi;
}

double tail_mass_fraction(const std::vector<double>& psi, double fraction) {
  const std::size_t n = psi.size();
  std::size_t k = (std::size_t)((double)n * fraction * 0.5);
  if (k < 1) k = 1;
  long double outer = 0.0L, total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double m = (long double)psi[i] * (long double)psi[i];
    total += m;
    if (i < k || i >= n - k) outer += m;
  }
  if (total <= 0.0L) return 0.0;
  return (double)(outer / total);
}

std::vector<double> ground_state(const SmoothFn& w, const Grid& grid, double anchor) {
  std::vector<long double> wv = sample_values(w, grid);
  if (!((double)wv.front() < 0.0 && (double)wv.back() > 0.0))
    throw std::runtime_error(
        "ground_state: superpotential does not change sign from - to + across the grid; "
        "zero mode not normalizable");

  std::vector<long double> cum = num::cumulative(wv, (long double)grid.h());
  long double base = cum[(std::size_t)grid.nearest(anchor)];
  std::vector<long double> expo(cum.size()), pref(cum.size(), 1.0L);
  for (std::size_t i = 0; i < cum.size(); ++i) expo[i] = -(cum[i] - base);
  return normalize_state(assemble(pref, expo), grid.h());
}

std::pair<std::vector<double>, std::vector<double>> excited_states(const SuperTriple& t,
                                                                   const SmoothFn& wplus,
                                                                   const SmoothFn& wtilde,
                                                                   const Grid& grid) {
  const std::size_t n = (std::size_t)grid.points;
  std::vector<long double> w1v = sample_values(t.w1, grid);
  std::vector<long double> w2v = sample_values(t.w2, grid);
  std::vector<long double> w0v = sample_values(t.w0, grid);

  std::vector<long double> cum1 = num::cumulative(w1v, (long double)grid.h());
  std::vector<long double> cum2 = num::cumulative(w2v, (long double)grid.h());

  std::vector<long double> pref1(n), expo1(n), pref2(n), expo2(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double x = (long double)grid.x((int)i);
    pref1[i] = wplus.jet(x)[0];
    SmoothFn::Jet jt = wtilde.jet(x);
    pref2[i] = (w0v[i] + w2v[i]) * jt[0] - jt[1];
    expo1[i] = -cum1[i];
    expo2[i] = -cum2[i];
  }

  std::vector<double> psi1 = assemble(pref1, expo1);
  std::vector<double> psi2 = assemble(pref2, expo2);
  check_tail(psi1, "first excited state");
  check_tail(psi2, "second excited state");
  return {normalize_state(std::move(psi1), grid.h()),
          normalize_state(std::move(psi2), grid.h())};
}

std::vector<double> apply_B(const SmoothFn& w, int sign, const std::vector<double>& psi,
                            const Grid& grid) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("apply_B: sign must be +1 or -1");
  if ((int)psi.size() != grid.points)
    throw std::invalid_argument("apply_B: sample count does not match the grid");
  std::vector<double> dpsi = num::derivative1(psi, grid.h());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    double wv = w((double)grid.x((int)i));
    out[i] = (-(double)sign * dpsi[i] + wv * psi[i]) * inv_sqrt2;
  }
  return out;
}

double inner_product(const std::vector<double>& a, const std::vector<double>& b,
                     const Grid& grid) {
  if (a.size() != b.size() || (int)a.size() != grid.points)
    throw std::invalid_argument("inner_product: size mismatch");
  std::vector<long double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    prod[i] = (long double)a[i] * (long double)b[i];
  return (double)num::simpson(prod, (long double)grid.h());
}

QesModel build_model(const GeneratorSpec& g, Grid grid, bool adaptive) {
  QesModel m;
  const int max_doublings = 4;
  for (int attempt = 0;; ++attempt) {
    WPlusPair pair = build_wplus_pair(g, grid.half_width);
    SuperTriple t = build_supertriple(pair);
    SmoothFn vm = potential(t.w0, -1);

    m.grid = grid;
    m.v.assign((std::size_t)grid.points, 0.0);
    for (int i = 0; i < grid.points; ++i) m.v[(std::size_t)i] = vm(grid.x(i));
    m.psi0 = ground_state(t.w0, grid, pair.x0);
    std::tie(m.psi1, m.psi2) = excited_states(t, pair.wplus, pair.wtilde, grid);

    if (!adaptive) break;
    bool ok = true;
    const std::size_t n = (std::size_t)grid.points;
    std::size_t k = n / 20;
    for (const auto* psi : {&m.psi0, &m.psi1, &m.psi2}) {
      double peak = 0.0, edge = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        peak = std::max(peak, std::fabs((*psi)[i]));
        if (i < k || i >= n - k) edge = std::max(edge, std::fabs((*psi)[i]));
      }
      ok = ok && edge < 1e-10 * peak;
    }
    if (ok) break;
    if (attempt >= max_doublings)
      throw std::runtime_error("build_model: states still reach the boundary after widening "
                               "the grid 16-fold; check the generator");
    grid.half_width *= 2.0;
  }

  m.energies = {0.0, g.epsilon, g.epsilon + g.epsilon1};
  m.epsilon = g.epsilon;
  m.epsilon1 = g.epsilon1;
  m.params = g.params;
  m.description = g.u.str();
  return m;
}

}  // namespace qeskit
