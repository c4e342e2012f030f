#include "qeskit/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "qeskit/numerics.hpp"
#include "qeskit/states.hpp"

namespace qeskit {

namespace {

using Jet = SmoothFn::Jet;

struct SourceJets {
  Jet wp, wt, u;
};

SourceJets source_jets(const SuperTriple& t, long double x) {
  const Jet a = t.w0.jet(x), b = t.w1.jet(x), c = t.w2.jet(x);
  SourceJets s;
  for (int i = 0; i < 3; ++i) {
    s.wp[i] = a[i] + b[i];
    s.wt[i] = b[i] + c[i];
  }
  s.u[0] = s.wp[0] * s.wt[0];
  s.u[1] = s.wp[1] * s.wt[0] + s.wp[0] * s.wt[1];
  s.u[2] = s.wp[2] * s.wt[0] + 2.0L * s.wp[1] * s.wt[1] + s.wp[0] * s.wt[2];
  return s;
}

// Sources built from value/slope-only jets leave the curvature slot empty;
// recover U'' by differencing the exact U' profile.
SourceJets full_source_jets(const SuperTriple& t, long double x) {
  SourceJets s = source_jets(t, x);
  if (std::isnan(s.u[2])) {
    const long double h = 1e-4L * (1.0L + 0.1L * std::fabs((double)x));
    auto u1 = [&t](long double y) { return source_jets(t, y).u[1]; };
    s.u[2] = (8.0L * (u1(x + h) - u1(x - h)) - (u1(x + 2.0L * h) - u1(x - 2.0L * h))) /
             (12.0L * h);
  }
  return s;
}

constexpr double kZoneRadius = 0.01;

struct Zone {
  double lo, hi;
  num::Barycentric<long double> calw;
  num::Barycentric<long double> r0;
};

struct Kern {
  SuperTriple t;
  long double eps = 0.0, eps1 = 0.0;
  std::vector<Zone> zones;

  long double raw_calw(long double x) const {
    const SourceJets s = full_source_jets(t, x);
    const long double m = 2.0L * (2.0L * eps + s.u[0]);
    const long double d = 2.0L * s.wt[0] * (s.u[0] + 2.0L * eps) - s.u[1];
    const long double n =
        8.0L * eps * eps1 - s.u[2] + 2.0L * s.u[0] * (4.0L * (eps1 - eps) - 3.0L * s.u[0]);
    return (d - s.u[1]) / m + n / (2.0L * d);
  }
  long double raw_r0(long double x) const {
    const SourceJets s = source_jets(t, x);
    const long double d = 2.0L * s.wt[0] * (s.u[0] + 2.0L * eps) - s.u[1];
    return d / s.u[1];
  }
  long double calw_value(long double x) const {
    for (const auto& z : zones) {
      if ((double)x > z.lo && (double)x < z.hi) return z.calw(x);
    }
    return raw_calw(x);
  }
  long double r0_value(long double x) const {
    for (const auto& z : zones) {
      if ((double)x > z.lo && (double)x < z.hi) return z.r0(x);
    }
    return raw_r0(x);
  }
};

template <typename F>
Jet fd_jet(const F& v, long double x) {
  const long double h = 1e-4L * (1.0L + 0.1L * std::fabs((double)x));
  const long double f0 = v(x);
  const long double f1 = v(x + h), fm1 = v(x - h);
  const long double f2 = v(x + 2.0L * h), fm2 = v(x - 2.0L * h);
  Jet j;
  j[0] = f0;
  j[1] = (8.0L * (f1 - fm1) - (f2 - fm2)) / (12.0L * h);
  j[2] = (16.0L * (f1 + fm1) - (f2 + fm2) - 30.0L * f0) / (12.0L * h * h);
  return j;
}

struct GRatios {
  long double r1 = 0.0L, r2 = 0.0L, r3 = 0.0L;  // G_{m-1}/G_m, G_{m-2}/G_m, G_{m-3}/G_m
};

GRatios g_ratios(int m, long double y) {
  long double gm3 = 0.0L, gm2 = 0.0L, gm1 = 1.0L, gm = 2.0L * y;  // G_{-2}.. up to G_1
  for (int k = 1; k < m; ++k) {
    const long double next = 2.0L * y * gm + 2.0L * k * gm1;
    gm3 = gm2;
    gm2 = gm1;
    gm1 = gm;
    gm = next;
    if (std::fabs((double)gm) > 1e280) {
      const long double s = 1e-280L;
      gm *= s;
      gm1 *= s;
      gm2 *= s;
      gm3 *= s;
    }
  }
  return {gm1 / gm, gm2 / gm, gm3 / gm};
}

Jet oscillator_w0_jet(int n, double eps, long double x) {
  if (n == 0) return {(long double)eps * x, (long double)eps, 0.0L};
  const long double e = eps;
  const long double sq = std::sqrt((long double)eps);
  const GRatios g = g_ratios(2 * n, sq * x);
  const long double k = n;
  const long double dr1 = 2.0L * (2.0L * k - 1.0L) * g.r2 - 4.0L * k * g.r1 * g.r1;
  const long double dr2 = 2.0L * (2.0L * k - 2.0L) * g.r3 - 4.0L * k * g.r2 * g.r1;
  const long double d2r1 = 2.0L * (2.0L * k - 1.0L) * dr2 - 8.0L * k * g.r1 * dr1;
  return {e * x + 4.0L * k * sq * g.r1, e + 4.0L * k * e * dr1, 4.0L * k * e * sq * d2r1};
}

SmoothFn linear_w(double eps) {
  return SmoothFn([eps](long double x) -> Jet { return {(long double)eps * x, eps, 0.0L}; });
}

SmoothFn morse_w(int n, double eps) {
  const long double a = (long double)eps + 0.5L - (long double)n;
  return SmoothFn([a](long double x) -> Jet {
    const long double u = std::exp(-x);
    return {a - u, u, -u};
  });
}

SmoothFn negate(const SmoothFn& f) {
  return SmoothFn([f](long double x) -> Jet {
    const Jet j = f.jet(x);
    return {-j[0], -j[1], -j[2]};
  });
}

}  // namespace

ChainStep make_chain_step(const SuperTriple& t, Interval scan) {
  if (!(scan.hi > scan.lo)) throw std::invalid_argument("make_chain_step: empty scan interval");
  if (!(t.epsilon > 0.0) || !(t.epsilon1 > 0.0)) {
    throw std::invalid_argument("make_chain_step: source gaps must be positive");
  }
  auto kern = std::make_shared<Kern>();
  kern->t = t;
  kern->eps = t.epsilon;
  kern->eps1 = t.epsilon1;

  const int n = 8001;
  const double h = (scan.hi - scan.lo) / (n - 1);
  std::vector<double> dvals(n);
  double dscale = 0.0;
  double prev_m = 0.0;
  for (int i = 0; i < n; ++i) {
    const long double x = scan.lo + h * i;
    const SourceJets s = source_jets(t, x);
    const double m = 2.0 * t.epsilon + (double)s.u[0];
    if (i > 0 && (m < 0.0) != (prev_m < 0.0)) {
      throw std::domain_error(
          "make_chain_step: source potential is singular (2*eps + U changes sign)");
    }
    prev_m = m;
    dvals[i] = 2.0 * (double)s.wt[0] * ((double)s.u[0] + 2.0 * t.epsilon) - (double)s.u[1];
    dscale = std::max(dscale, std::fabs(dvals[i]));
  }
  int tiny_run = 0;
  for (int i = 0; i < n; ++i) {
    tiny_run = std::fabs(dvals[i]) <= 1e-13 * dscale ? tiny_run + 1 : 0;
    if (tiny_run > 40) {
      throw std::domain_error(
          "make_chain_step: branch ratio vanishes on an interval (degenerate source)");
    }
  }

  auto rawd = [&t](double x) {
    const SourceJets s = source_jets(t, (long double)x);
    return 2.0 * (double)s.wt[0] * ((double)s.u[0] + 2.0 * t.epsilon) - (double)s.u[1];
  };
  std::vector<double> centers;
  for (int i = 0; i + 1 < n; ++i) {
    if (dvals[i] == 0.0) centers.push_back(scan.lo + h * i);
    if ((dvals[i] < 0.0) != (dvals[i + 1] < 0.0) && dvals[i] != 0.0 && dvals[i + 1] != 0.0) {
      centers.push_back(
          num::bisect(rawd, scan.lo + h * i, scan.lo + h * (i + 1), 1e-13 * (scan.hi - scan.lo)));
    }
  }
  std::sort(centers.begin(), centers.end());

  const double r = kZoneRadius;
  std::size_t i = 0;
  while (i < centers.size()) {
    std::size_t j = i;
    while (j + 1 < centers.size() && centers[j + 1] - centers[j] < 8.0 * r) ++j;
    const double lo = centers[i] - r;
    const double hi = centers[j] + r;
    std::vector<long double> nodes;
    for (int m = 4; m >= 1; --m) nodes.push_back((long double)lo - m * r);
    for (int m = 1; m <= 4; ++m) nodes.push_back((long double)hi + m * r);
    std::vector<long double> wv, rv;
    for (const long double xn : nodes) {
      wv.push_back(kern->raw_calw(xn));
      rv.push_back(kern->raw_r0(xn));
    }
    kern->zones.push_back(Zone{lo, hi, num::Barycentric<long double>(nodes, wv),
                               num::Barycentric<long double>(nodes, rv)});
    i = j + 1;
  }

  ChainStep step;
  step.source = t;
  step.offset = t.epsilon + t.epsilon1;
  step.u = SmoothFn([kern](long double x) -> Jet { return full_source_jets(kern->t, x).u; });
  step.calw = SmoothFn([kern](long double x) -> Jet {
    return fd_jet([&kern](long double y) { return kern->calw_value(y); }, x);
  });
  step.r0 = SmoothFn([kern](long double x) -> Jet {
    return fd_jet([&kern](long double y) { return kern->r0_value(y); }, x);
  });
  auto pots = partner_potentials(step.calw);
  step.v_minus = pots.first;
  step.v_plus = pots.second;
  return step;
}

SmoothFn partner_superpotential(const SuperTriple& t, Interval scan) {
  return make_chain_step(t, scan).calw;
}

std::pair<SmoothFn, SmoothFn> partner_potentials(const SmoothFn& w) {
  const long double nan = std::numeric_limits<long double>::quiet_NaN();
  SmoothFn minus([w, nan](long double x) -> Jet {
    const Jet j = w.jet(x);
    return {0.5L * (j[0] * j[0] - j[1]), j[0] * j[1] - 0.5L * j[2], nan};
  });
  SmoothFn plus([w, nan](long double x) -> Jet {
    const Jet j = w.jet(x);
    return {0.5L * (j[0] * j[0] + j[1]), j[0] * j[1] + 0.5L * j[2], nan};
  });
  return {minus, plus};
}

std::vector<double> partner_ground_state(const SmoothFn& calw, const Grid& grid) {
  return ground_state(negate(calw), grid, 0.0);
}

std::vector<double> map_eigenfunction(const SmoothFn& calw, const std::vector<double>& psi,
                                      double energy, bool up, const Grid& grid) {
  if (!(energy > 0.0)) {
    throw std::invalid_argument("map_eigenfunction: the map needs a positive energy");
  }
  if (static_cast<int>(psi.size()) != grid.points) {
    throw std::invalid_argument("map_eigenfunction: sample count does not match the grid");
  }
  const std::vector<double> dpsi = num::derivative1(psi, grid.h());
  const double s = up ? 1.0 : -1.0;
  const double scale = 1.0 / std::sqrt(2.0 * energy);
  std::vector<double> out(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    out[k] = (s * dpsi[k] + calw(grid.x(static_cast<int>(k))) * psi[k]) * scale;
  }
  return out;
}

double oscillator_chain_potential(int n, double eps, double x) {
  if (n < 1) throw std::invalid_argument("oscillator_chain_potential: n must be >= 1");
  const long double e = eps;
  const GRatios g = g_ratios(2 * n, std::sqrt((long double)eps) * (long double)x);
  const long double k = n;
  const long double v = e * e * (long double)x * (long double)x / 2.0L -
                        8.0L * e * k * (2.0L * k - 1.0L) * g.r2 +
                        16.0L * e * k * k * g.r1 * g.r1 + (4.0L * k - 1.0L) * e / 2.0L;
  return (double)v;
}

double oscillator_base_potential(int n, double eps, double x) {
  if (n < 1) throw std::invalid_argument("oscillator_base_potential: n must be >= 1");
  return eps * eps * x * x / 2.0 + (2.0 * n - 0.5) * eps;
}

double oscillator_chain_w0(int n, double eps, double x) {
  if (n < 0) throw std::invalid_argument("oscillator_chain_w0: n must be >= 0");
  return (double)oscillator_w0_jet(n, eps, (long double)x)[0];
}

std::vector<long double> hermite_g(int kmax, long double y) {
  if (kmax < 0) throw std::invalid_argument("hermite_g: kmax must be >= 0");
  std::vector<long double> g(static_cast<std::size_t>(kmax) + 1);
  g[0] = 1.0L;
  if (kmax >= 1) g[1] = 2.0L * y;
  for (int k = 1; k < kmax; ++k) {
    g[static_cast<std::size_t>(k) + 1] =
        2.0L * y * g[static_cast<std::size_t>(k)] + 2.0L * k * g[static_cast<std::size_t>(k) - 1];
  }
  return g;
}

std::pair<double, double> morse_chain_potential(int n, double eps, double x) {
  if (n < 0 || n > 2) {
    throw std::invalid_argument("morse_chain_potential: closed forms exist for n in {0, 1, 2}");
  }
  if (!(eps > n + 0.5)) {
    throw std::invalid_argument("morse_chain_potential: needs eps > n + 1/2");
  }
  const double common = (1.0 + 2.0 * eps) * (1.0 + 2.0 * eps) / 8.0;
  const double u = std::exp(-x);
  const double v_plus = common + (u * u - 2.0 * (eps - 2.0 * n) * u) / 2.0;
  double v_minus = 0.0;
  if (n == 0) {
    v_minus = common + (u * u - 2.0 * (eps + 1.0) * u) / 2.0;
  } else if (n == 1) {
    const double w = std::exp(x);
    const double dm = 2.0 - 2.0 * (2.0 * eps - 1.0) * w + eps * (2.0 * eps - 1.0) * w * w;
    const double dm_scale = 2.0 + 2.0 * (2.0 * eps - 1.0) * w + eps * (2.0 * eps - 1.0) * w * w;
    if (std::fabs(dm) < 1e-9 * dm_scale) {
      std::ostringstream os;
      os << "morse_chain_potential: denominator vanishes at x = " << x;
      throw std::domain_error(os.str());
    }
    v_minus = common + (u * u - 2.0 * (eps - 1.0) * u) / 2.0 +
              2.0 * (eps * (2.0 * eps - 1.0) * w - 2.0) / (eps * dm) -
              8.0 * ((2.0 * eps - 1.0) * w - 1.0) / (eps * dm * dm);
  } else {
    const double w = std::exp(x);
    const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
    const double t1 =
        (2.0 * eps - 3.0) *
        (8.0 * w - (eps - 1.0) * (48.0 * w2 - (2.0 * eps - 1.0) * (36.0 * w3 - 16.0 * eps * w4)));
    const double den =
        4.0 - (2.0 * eps - 3.0) * (8.0 * w - (eps - 1.0) *
                                                 (12.0 * w2 - (2.0 * eps - 1.0) *
                                                                  (4.0 * w3 - eps * w4)));
    const double t2 =
        (2.0 * eps - 3.0) *
        (8.0 * w - (eps - 1.0) * (24.0 * w2 - (2.0 * eps - 1.0) * (12.0 * w3 - 4.0 * eps * w4)));
    const double den_scale = 4.0 + std::fabs(2.0 * eps - 3.0) *
                                       (8.0 * w + (eps - 1.0) *
                                                      (12.0 * w2 + (2.0 * eps - 1.0) *
                                                                       (4.0 * w3 + eps * w4)));
    if (std::fabs(den) < 1e-9 * den_scale) {
      std::ostringstream os;
      os << "morse_chain_potential: denominator vanishes at x = " << x;
      throw std::domain_error(os.str());
    }
    v_minus = common + (u * u - 2.0 * (eps - 3.0) * u) / 2.0 + t1 / den + t2 * t2 / (den * den);
  }
  return {v_minus, v_plus};
}

double morse_r0(double eps, double x) {
  const double u = std::exp(-x);
  const double num = 4.0 * u * u + 6.0 * (1.0 - 2.0 * eps) * u +
                     3.0 * (1.0 + 4.0 * eps * (eps - 1.0)) -
                     2.0 * eps * (1.0 - 3.0 * eps + 2.0 * eps * eps) * std::exp(x);
  return num / (2.0 * u + 1.0 - 2.0 * eps);
}

std::vector<ChainStep> iterate_chain(ChainFamily family, int steps, double eps) {
  if (steps < 1) throw std::invalid_argument("iterate_chain: steps must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("iterate_chain: eps must be positive");
  std::vector<ChainStep> out;
  if (family == ChainFamily::oscillator) {
    for (int k = 1; k <= steps; ++k) {
      SuperTriple t;
      const int prev = k - 1;
      const double e = eps;
      t.w0 = SmoothFn([prev, e](long double x) { return oscillator_w0_jet(prev, e, x); });
      t.w1 = linear_w(eps);
      t.w2 = linear_w(eps);
      t.epsilon = (2.0 * k - 1.0) * eps;
      t.epsilon1 = eps;
      out.push_back(make_chain_step(t, {-40.0, 40.0}));
    }
  } else {
    if (!(eps > 2.0 * steps - 1.0)) {
      throw std::invalid_argument("iterate_chain: the exponential family needs eps > 2*steps - 1");
    }
    for (int k = 1; k <= steps; ++k) {
      SuperTriple t;
      t.w0 = (k == 1) ? morse_w(0, eps) : negate(out.back().calw);
      t.w1 = morse_w(2 * k - 1, eps);
      t.w2 = morse_w(2 * k, eps);
      t.epsilon = (2.0 * k - 1.0) * (eps - k + 1.0);
      t.epsilon1 = eps - (2.0 * k - 1.0);
      out.push_back(make_chain_step(t, {-6.0, 36.0}));
    }
  }
  return out;
}

std::vector<ChainStep> iterate_chain(const std::string& family, int steps, double eps) {
  if (family == "oscillator") return iterate_chain(ChainFamily::oscillator, steps, eps);
  if (family == "morse") return iterate_chain(ChainFamily::morse, steps, eps);
  throw std::invalid_argument("iterate_chain: unknown family '" + family + "'");
}

}  // namespace qeskit
