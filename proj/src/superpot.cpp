#include "qeskit/superpot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "qeskit/numerics.hpp"

namespace qeskit {

namespace {

constexpr long double kNaN = std::numeric_limits<long double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

long double sgn(long double v) { return v < 0.0L ? -1.0L : 1.0L; }

// Evaluation context: U and its symbolic derivatives with bound parameters.
struct UDerivs {
  Expr u;
  std::vector<Expr> du;  // du[k] = U^{(k+1)}, k = 0..5
  Params params;

  UDerivs(const GeneratorSpec& g, int max_order) : u(g.u), params(g.params) {
    du.reserve((std::size_t)max_order);
    for (int k = 1; k <= max_order; ++k) du.push_back(g.u.derivative(k));
  }
  long double value(long double x) const { return u.evaluate_ld(x, params); }
  long double deriv(int order, long double x) const {
    return du[(std::size_t)(order - 1)].evaluate_ld(x, params);
  }
};

}  // namespace

std::vector<double> locate_generator_zeros(const GeneratorSpec& g, Interval scan, int points) {
  if (!(scan.hi > scan.lo) || points < 16)
    throw std::invalid_argument("locate_generator_zeros: bad scan interval");
  UDerivs f(g, 2);
  const long double span = (long double)scan.hi - (long double)scan.lo;
  const long double hs = span / (long double)(points - 1);

  std::vector<long double> xs((std::size_t)points), u1((std::size_t)points);
  long double uref = 0.0L;
  for (int i = 0; i < points; ++i) {
    long double x = (long double)scan.lo + hs * i;
    xs[(std::size_t)i] = x;
    u1[(std::size_t)i] = f.deriv(1, x);
    uref = std::max(uref, std::fabs(f.value(x)));
  }
  if (uref <= 0.0L) uref = 1.0L;

  auto du = [&](long double x) { return f.deriv(1, x); };
  auto d2u = [&](long double x) { return f.deriv(2, x); };

  std::vector<double> zeros;
  auto consider = [&](long double cand) {
    cand = num::newton_refine(du, d2u, cand, xs.front(), xs.back(), 6);
    long double uval = f.value(cand);
    if (std::fabs(uval) > 1e-9L * uref) return;  // critical point of U, not a zero
    for (double z : zeros)
      if (std::fabs((long double)z - cand) < 1e-8L * span) return;
    zeros.push_back((double)cand);
  };

  for (int i = 0; i + 1 < points; ++i) {
    long double a = u1[(std::size_t)i], b = u1[(std::size_t)i + 1];
    if (a == 0.0L) {
      consider(xs[(std::size_t)i]);
      continue;
    }
    if ((a < 0.0L) != (b < 0.0L)) {
      long double root = num::bisect(du, xs[(std::size_t)i], xs[(std::size_t)i + 1],
                                     1e-13L * span);
      consider(root);
    }
  }
  if (u1.back() == 0.0L) consider(xs.back());
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

ValidationReport validate_generator(const GeneratorSpec& g, Interval scan, int points) {
  ValidationReport rep;
  const double e = g.epsilon, e1 = g.epsilon1;
  if (!(e > 0.0) || !(e1 > 0.0)) {
    rep.diagnostics.push_back("level gaps must be positive: epsilon=" + fmt(e) +
                              ", epsilon1=" + fmt(e1));
    return rep;
  }

  std::vector<double> zeros = locate_generator_zeros(g, scan, points);
  if (zeros.empty()) {
    rep.diagnostics.push_back("no zero of U found in [" + fmt(scan.lo) + ", " + fmt(scan.hi) +
                              "]; the generator must vanish exactly once");
    return rep;
  }
  if (zeros.size() > 1) {
    std::string where;
    for (double z : zeros) where += " " + fmt(z);
    rep.diagnostics.push_back("U has " + std::to_string(zeros.size()) + " zeros (at" + where +
                              "); multi-well generators are not supported");
    return rep;
  }
  const long double x0 = (long double)zeros[0];
  rep.x0 = (double)x0;

  UDerivs f(g, 6);
  const long double span = (long double)scan.hi - (long double)scan.lo;
  const long double hs = span / (long double)(points - 1);

  long double u0 = f.value(x0);
  long double d1 = f.deriv(1, x0), d2 = f.deriv(2, x0), d3 = f.deriv(3, x0);
  long double d4 = f.deriv(4, x0), d5 = f.deriv(5, x0), d6 = f.deriv(6, x0);
  const long double ee1 = (long double)e * (long double)e1;

  auto push = [&](const std::string& name, long double measured, long double required,
                  long double tol) {
    ConditionCheck c;
    c.name = name;
    c.measured = (double)measured;
    c.required = (double)required;
    c.margin = (double)(tol - std::fabs(measured - required));
    c.pass = std::fabs(measured - required) <= tol;
    rep.checks.push_back(c);
  };

  push("U(x0) = 0", u0, 0.0L, 1e-8L * std::max(1.0L, 8.0L * ee1));
  push("U'(x0) = 0", d1, 0.0L, 1e-8L * std::max(1.0L, 8.0L * ee1));
  push("U''(x0) = 8*eps*eps1", d2, 8.0L * ee1, 1e-8L * 8.0L * ee1);
  push("U'''(x0) = 0", d3, 0.0L, 1e-8L * std::max(1.0L, std::fabs(d4)));
  push("U''''(x0) = 64*eps*eps1*(eps1-eps)", d4, 64.0L * ee1 * ((long double)e1 - (long double)e),
       1e-8L * std::max(1.0L, 64.0L * ee1 * ((long double)e + (long double)e1)));
  push("U'''''(x0) = 0", d5, 0.0L, 1e-8L * std::max(1.0L, std::fabs(d6)));

  {
    // Sixth-derivative inequality at the zero.
    long double lhs = d6 / (8.0L * ee1);
    long double rhs = 32.0L * (2.0L * (long double)e1 * (long double)e1 -
                               13.0L * ee1 +
                               2.0L * (long double)e * (long double)e);
    ConditionCheck c;
    c.name = "U6 inequality";
    c.measured = (double)lhs;
    c.required = (double)rhs;
    long double tol = 1e-8L * std::max({1.0L, std::fabs(lhs), std::fabs(rhs)});
    c.margin = (double)(lhs - rhs);
    c.pass = lhs - rhs >= -tol;
    rep.checks.push_back(c);
  }

  // Scan checks away from x0. The exclusion window keeps the sextic flat
  // spot of the radicand out of the strict-positivity scans.
  const long double excl = std::max(2.0L * hs, 1e-3L);
  long double umin = std::numeric_limits<long double>::infinity();
  double umin_at = 0.0;
  long double smin_rel = std::numeric_limits<long double>::infinity();
  long double smin = std::numeric_limits<long double>::infinity();
  double smin_at = 0.0;
  for (int i = 0; i < points; ++i) {
    long double x = (long double)scan.lo + hs * i;
    if (std::fabs(x - x0) <= excl) continue;
    long double u = f.value(x), up = f.deriv(1, x);
    if (u < umin) { umin = u; umin_at = (double)x; }
    long double s = up * up + 4.0L * u * u * u +
                    8.0L * ((long double)e - (long double)e1) * u * u - 16.0L * ee1 * u;
    long double scale = up * up + std::fabs(4.0L * u * u * u) +
                        std::fabs(8.0L * ((long double)e - (long double)e1)) * u * u +
                        16.0L * ee1 * std::fabs(u) + 1.0L;
    if (s / scale < smin_rel) smin_rel = s / scale;
    if (s < smin) { smin = s; smin_at = (double)x; }
  }
  {
    ConditionCheck c;
    c.name = "U > 0 away from x0";
    c.measured = (double)umin;
    c.required = 0.0;
    c.margin = (double)umin;
    c.pass = umin > 0.0L;
    rep.checks.push_back(c);
    if (!c.pass)
      rep.diagnostics.push_back("U dips to " + fmt(c.measured) + " at x = " + fmt(umin_at));
  }
  {
    ConditionCheck c;
    c.name = "radicand nonnegative";
    c.measured = (double)smin_rel;
    c.required = 0.0;
    c.margin = (double)smin_rel;
    c.pass = smin_rel >= -1e-10L;
    rep.checks.push_back(c);
  }
  {
    ConditionCheck c;
    c.name = "R > 0 away from x0";
    c.measured = (double)smin;
    c.required = 0.0;
    c.margin = (double)smin;
    c.pass = smin > 0.0L;
    rep.checks.push_back(c);
    if (!c.pass)
      rep.diagnostics.push_back("discriminant radicand reaches " + fmt((double)smin) +
                                " at x = " + fmt(smin_at));
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  for (const auto& c : rep.checks)
    if (!c.pass)
      rep.diagnostics.push_back("condition failed: " + c.name + " (measured " + fmt(c.measured) +
                                ", required " + fmt(c.required) + ")");
  return rep;
}

namespace {

// Exact-path jets of W+, W~+ and R at one point, written in quotient form so
// that no catastrophic cancellation occurs away from the flat zero of the
// radicand:
//   S  = U'^2 + 4U^3 + 8(e-e1)U^2 - 16 e e1 U      (radicand)
//   T  = S'/U' = 2U'' + 12U^2 + 16(e-e1)U - 16 e e1
//   Q  = U' + tau*sqrt(S),  tau = sigma * sign(U')
//   P  = 2U(U+2e),   M = 2(U+2e)
//   W+ = P/Q,   W~+ = Q/M,   R = sqrt(S)/|U'|
struct ExactJets {
  long double wp, wp1, wp2;
  long double wt, wt1, wt2;
  long double r, r1;
};

struct Kern {
  UDerivs f;
  long double eps, eps1;
  SignSchedule sched;
  long double x0;
  long double zone;
  double half_width;
  std::vector<num::Barycentric<long double>> patch;  // 8 tables, see kPatch* below

  Kern(const GeneratorSpec& g, long double x0_, double hw)
      : f(g, 3),
        eps((long double)g.epsilon),
        eps1((long double)g.epsilon1),
        sched(g.sign_schedule),
        x0(x0_),
        half_width(hw) {
    long double ee1 = eps * eps1;
    zone = std::max(1e-4L * (long double)hw, 0.008L / std::sqrt(std::sqrt(4.0L * ee1)));
  }
};

enum { kWp = 0, kWp1, kWp2, kWt, kWt1, kWt2, kR, kR1, kPatchCount };

ExactJets exact_jets(const Kern& k, long double x) {
  const long double e = k.eps, e1 = k.eps1, ee1 = e * e1;
  long double u = k.f.value(x);
  long double u1 = k.f.deriv(1, x);
  long double u2 = k.f.deriv(2, x);
  long double u3 = k.f.deriv(3, x);

  long double s = u1 * u1 + 4.0L * u * u * u + 8.0L * (e - e1) * u * u - 16.0L * ee1 * u;
  long double scale = u1 * u1 + std::fabs(4.0L * u * u * u) +
                      std::fabs(8.0L * (e - e1)) * u * u + 16.0L * ee1 * std::fabs(u) + 1.0L;
  if (s < 0.0L) {
    if (s < -1e-10L * scale)
      throw std::domain_error("discriminant radicand is negative at x = " + fmt((double)x) +
                              " (value " + fmt((double)s) + "); generator invalid");
    s = 0.0L;
  }
  long double t = 2.0L * u2 + 12.0L * u * u + 16.0L * (e - e1) * u - 16.0L * ee1;
  long double tp = 2.0L * u3 + 24.0L * u * u1 + 16.0L * (e - e1) * u1;
  long double s1 = u1 * t;
  long double s2 = u2 * t + u1 * tp;

  long double sq = std::sqrt(s);
  long double sq1 = 0.0L, sq2 = 0.0L;
  if (sq > 0.0L) {
    sq1 = s1 / (2.0L * sq);
    sq2 = s2 / (2.0L * sq) - s1 * s1 / (4.0L * s * sq);
  }

  long double tau = (long double)k.sched.at((double)x) * sgn(u1);
  long double q = u1 + tau * sq;
  long double q1 = u2 + tau * sq1;
  long double q2 = u3 + tau * sq2;
  if (q == 0.0L)
    throw std::domain_error("superpotential branch denominator vanishes at x = " +
                            fmt((double)x));

  long double p = 2.0L * u * (u + 2.0L * e);
  long double p1 = 4.0L * u1 * (u + e);
  long double p2 = 4.0L * u2 * (u + e) + 4.0L * u1 * u1;

  ExactJets j;
  j.wp = p / q;
  j.wp1 = (p1 - j.wp * q1) / q;
  j.wp2 = (p2 - 2.0L * j.wp1 * q1 - j.wp * q2) / q;

  long double m = 2.0L * (u + 2.0L * e);
  long double m1 = 2.0L * u1;
  long double m2 = 2.0L * u2;
  if (m == 0.0L)
    throw std::domain_error("U + 2*eps vanishes at x = " + fmt((double)x));
  j.wt = q / m;
  j.wt1 = (q1 - j.wt * m1) / m;
  j.wt2 = (q2 - 2.0L * j.wt1 * m1 - j.wt * m2) / m;

  long double au1 = std::fabs(u1);
  if (au1 > 0.0L) {
    j.r = sq / au1;
    j.r1 = sq1 / au1 - sq * u2 * sgn(u1) / (u1 * u1);
  } else {
    j.r = 0.0L;
    j.r1 = 0.0L;
  }
  return j;
}

void build_patches(Kern& k) {
  std::vector<long double> nodes;
  for (int m = 4; m >= 1; --m) nodes.push_back(k.x0 - (long double)m * k.zone);
  for (int m = 1; m <= 4; ++m) nodes.push_back(k.x0 + (long double)m * k.zone);
  std::vector<std::vector<long double>> vals((std::size_t)kPatchCount,
                                             std::vector<long double>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ExactJets j = exact_jets(k, nodes[i]);
    vals[kWp][i] = j.wp;
    vals[kWp1][i] = j.wp1;
    vals[kWp2][i] = j.wp2;
    vals[kWt][i] = j.wt;
    vals[kWt1][i] = j.wt1;
    vals[kWt2][i] = j.wt2;
    vals[kR][i] = j.r;
    vals[kR1][i] = j.r1;
  }
  k.patch.reserve((std::size_t)kPatchCount);
  for (int fidx = 0; fidx < kPatchCount; ++fidx)
    k.patch.emplace_back(nodes, vals[(std::size_t)fidx]);
}

long double refine_zero(const UDerivs& f, long double guess, long double lo, long double hi) {
  auto du = [&](long double x) { return f.deriv(1, x); };
  auto d2u = [&](long double x) { return f.deriv(2, x); };
  return num::newton_refine(du, d2u, guess, lo, hi, 8);
}

}  // namespace

WPlusPair build_wplus_pair(const GeneratorSpec& g, double half_width) {
  if (!(g.epsilon > 0.0) || !(g.epsilon1 > 0.0))
    throw std::invalid_argument("build_wplus_pair: level gaps must be positive");

  long double x0;
  UDerivs probe(g, 2);
  if (g.x0) {
    x0 = refine_zero(probe, (long double)*g.x0, (long double)(-half_width),
                     (long double)half_width);
  } else {
    Interval scan{-half_width, half_width};
    std::vector<double> zeros = locate_generator_zeros(g, scan, 4001);
    if (zeros.empty())
      throw std::runtime_error("build_wplus_pair: no zero of U in [-L, L]");
    if (zeros.size() > 1)
      throw std::runtime_error("build_wplus_pair: U has multiple zeros; unsupported");
    x0 = (long double)zeros[0];
  }

  auto k = std::make_shared<Kern>(g, x0, half_width);
  build_patches(*k);

  WPlusPair pair;
  pair.x0 = (double)x0;
  pair.zone = (double)k->zone;
  pair.half_width = half_width;
  pair.epsilon = g.epsilon;
  pair.epsilon1 = g.epsilon1;

  pair.wplus = SmoothFn([k](long double x) -> SmoothFn::Jet {
    if (std::fabs(x - k->x0) < k->zone)
      return {k->patch[kWp](x), k->patch[kWp1](x), k->patch[kWp2](x)};
    ExactJets j = exact_jets(*k, x);
    return {j.wp, j.wp1, j.wp2};
  });
  pair.wtilde = SmoothFn([k](long double x) -> SmoothFn::Jet {
    if (std::fabs(x - k->x0) < k->zone)
      return {k->patch[kWt](x), k->patch[kWt1](x), k->patch[kWt2](x)};
    ExactJets j = exact_jets(*k, x);
    return {j.wt, j.wt1, j.wt2};
  });
  pair.r = SmoothFn([k](long double x) -> SmoothFn::Jet {
    if (std::fabs(x - k->x0) < k->zone)
      return {k->patch[kR](x), k->patch[kR1](x), kNaN};
    ExactJets j = exact_jets(*k, x);
    return {j.r, j.r1, kNaN};
  });
  return pair;
}

namespace {

// Value and first derivative of (w0, w1, w2) from the pair jets, exact path.
struct TripleVals {
  long double w0, w0p, w1, w1p, w2, w2p;
};

TripleVals triple_from_pair(const WPlusPair& p, long double x) {
  SmoothFn::Jet a = p.wplus.jet(x);
  SmoothFn::Jet b = p.wtilde.jet(x);
  const long double e = (long double)p.epsilon, e1 = (long double)p.epsilon1;
  TripleVals t;
  // w0/w1 from W+: w0,w1 = (W+ -/+ (W+' - 2e)/W+) / 2
  long double g = (a[1] - 2.0L * e) / a[0];
  long double gp = (a[2] - g * a[1]) / a[0];
  t.w0 = 0.5L * (a[0] - g);
  t.w0p = 0.5L * (a[1] - gp);
  t.w1 = 0.5L * (a[0] + g);
  t.w1p = 0.5L * (a[1] + gp);
  // w2 from W~+: w2 = (W~+ + (W~+' - 2e1)/W~+) / 2
  long double ht = (b[1] - 2.0L * e1) / b[0];
  long double htp = (b[2] - ht * b[1]) / b[0];
  t.w2 = 0.5L * (b[0] + ht);
  t.w2p = 0.5L * (b[1] + htp);
  return t;
}

struct TripleKern {
  WPlusPair pair;
  long double x0, zone;
  std::vector<num::Barycentric<long double>> patch;  // w0, w0', w1, w1', w2, w2'
};

}  // namespace

SuperTriple build_supertriple(const WPlusPair& pair) {
  auto k = std::make_shared<TripleKern>();
  k->pair = pair;
  k->x0 = (long double)pair.x0;
  k->zone = (long double)pair.zone;

  std::vector<long double> nodes;
  for (int m = 4; m >= 1; --m) nodes.push_back(k->x0 - (long double)m * k->zone);
  for (int m = 1; m <= 4; ++m) nodes.push_back(k->x0 + (long double)m * k->zone);
  std::vector<std::vector<long double>> vals(6, std::vector<long double>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    TripleVals t = triple_from_pair(pair, nodes[i]);
    vals[0][i] = t.w0;
    vals[1][i] = t.w0p;
    vals[2][i] = t.w1;
    vals[3][i] = t.w1p;
    vals[4][i] = t.w2;
    vals[5][i] = t.w2p;
  }
  k->patch.reserve(6);
  for (int fidx = 0; fidx < 6; ++fidx)
    k->patch.emplace_back(nodes, vals[(std::size_t)fidx]);

  // Consistency of the two routes to w1: through W+ and through W~+.
  {
    const long double e1 = (long double)pair.epsilon1;
    const int m = 401;
    const long double lo = k->x0 - (long double)pair.half_width;
    const long double step = 2.0L * (long double)pair.half_width / (long double)(m - 1);
    for (int i = 0; i < m; ++i) {
      long double x = lo + step * i;
      if (std::fabs(x - k->x0) <= k->zone) continue;
      TripleVals t = triple_from_pair(pair, x);
      SmoothFn::Jet b = pair.wtilde.jet(x);
      long double w1b = 0.5L * (b[0] - (b[1] - 2.0L * e1) / b[0]);
      if (std::fabs(t.w1 - w1b) > 1e-6L * std::max(1.0L, std::fabs(t.w1)))
        throw std::runtime_error(
            "superpotential hierarchy mismatch: the two routes to w1 disagree at x = " +
            fmt((double)x) + " (" + fmt((double)t.w1) + " vs " + fmt((double)w1b) + ")");
    }
  }

  auto make = [k](int vidx, int didx) {
    return SmoothFn([k, vidx, didx](long double x) -> SmoothFn::Jet {
      if (std::fabs(x - k->x0) < k->zone)
        return {k->patch[(std::size_t)vidx](x), k->patch[(std::size_t)didx](x), kNaN};
      TripleVals t = triple_from_pair(k->pair, x);
      long double v[6] = {t.w0, t.w0p, t.w1, t.w1p, t.w2, t.w2p};
      return {v[vidx], v[didx], kNaN};
    });
  };

  SuperTriple t;
  t.w0 = make(0, 1);
  t.w1 = make(2, 3);
  t.w2 = make(4, 5);
  t.epsilon = pair.epsilon;
  t.epsilon1 = pair.epsilon1;
  t.x0 = pair.x0;
  t.x0_tilde = pair.x0;  // W~+ inherits the zero of Q, which sits at x0
  return t;
}

SmoothFn potential(const SmoothFn& w, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("potential: sign must be +1 or -1");
  long double s = (long double)sign;
  return SmoothFn([w, s](long double x) -> SmoothFn::Jet {
    SmoothFn::Jet j = w.jet(x);
    return {0.5L * (j[0] * j[0] + s * j[1]), j[0] * j[1] + s * 0.5L * j[2], kNaN};
  });
}

double discriminant_R(const GeneratorSpec& g, double x) {
  double hw = std::max(10.0, 1.25 * std::fabs(x));
  WPlusPair pair = build_wplus_pair(g, hw);
  return pair.r(x);
}

}  // namespace qeskit
