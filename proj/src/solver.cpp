#include "qeskit/solver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qeskit/numerics.hpp"

namespace qeskit {

DiscreteOperator discretize(const std::vector<double>& v, double h) {
  if (v.size() < 5 || !(h > 0.0)) throw std::invalid_argument("discretize: bad input");
  DiscreteOperator op;
  op.h = h;
  const std::size_t m = v.size() - 2;
  op.diag.resize(m);
  op.off.assign(m - 1, -0.5 / (h * h));
  for (std::size_t i = 0; i < m; ++i) op.diag[i] = 1.0 / (h * h) + v[i + 1];
  return op;
}

int sturm_count_below(const DiscreteOperator& op, double lambda) {
  const double pivmin = DBL_MIN / DBL_EPSILON;
  int count = 0;
  double q = op.diag[0] - lambda;
  if (std::fabs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < op.diag.size(); ++i) {
    double e = op.off[i - 1];
    q = op.diag[i] - lambda - e * e / q;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> lowest_eigenvalues(const DiscreteOperator& op, int k) {
  if (k < 1 || (std::size_t)k > op.diag.size())
    throw std::invalid_argument("lowest_eigenvalues: bad level count");
  double lo = op.diag[0], hi = op.diag[0];
  for (std::size_t i = 0; i < op.diag.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(op.off[i - 1]);
    if (i + 1 < op.diag.size()) r += std::fabs(op.off[i]);
    lo = std::min(lo, op.diag[i] - r);
    hi = std::max(hi, op.diag[i] + r);
  }
  std::vector<double> vals((std::size_t)k);
  for (int j = 0; j < k; ++j) {
    double a = lo, b = hi;
    for (int it = 0; it < 300; ++it) {
      double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      if (sturm_count_below(op, mid) > j)
        b = mid;
      else
        a = mid;
      if (b - a <= 1e-13 * std::max(1.0, std::fabs(mid))) break;
    }
    vals[(std::size_t)j] = 0.5 * (a + b);
  }
  return vals;
}

namespace {

// (T - lambda I) x = r for a symmetric tridiagonal T, Gaussian elimination
// with row pivoting (second superdiagonal appears after swaps).
std::vector<double> solve_shifted(const std::vector<double>& diag,
                                  const std::vector<double>& off, double lambda,
                                  std::vector<double> r) {
  const std::size_t m = diag.size();
  std::vector<double> b(m), c(m, 0.0), c2(m, 0.0);
  double scale = std::fabs(lambda);
  for (std::size_t i = 0; i < m; ++i) {
    b[i] = diag[i] - lambda;
    if (i + 1 < m) c[i] = off[i];
    scale = std::max(scale, std::fabs(diag[i]));
  }
  const double tiny = std::max(scale, 1.0) * 1e-290;

  for (std::size_t i = 0; i + 1 < m; ++i) {
    double s = off[i];  // T[i+1][i], untouched by earlier steps
    if (std::fabs(b[i]) >= std::fabs(s)) {
      if (b[i] == 0.0) b[i] = tiny;
      double mult = s / b[i];
      b[i + 1] -= mult * c[i];
      r[i + 1] -= mult * r[i];
    } else {
      double mult = b[i] / s;
      double new_b1 = c[i] - mult * b[i + 1];
      double new_c1 = (i + 2 < m) ? -mult * c[i + 1] : 0.0;
      b[i] = s;
      c[i] = b[i + 1];
      c2[i] = (i + 2 < m) ? c[i + 1] : 0.0;
      b[i + 1] = new_b1;
      c[i + 1] = new_c1;
      std::swap(r[i], r[i + 1]);
      r[i + 1] -= mult * r[i];
    }
  }
  if (b[m - 1] == 0.0) b[m - 1] = tiny;

  std::vector<double> x(m);
  x[m - 1] = r[m - 1] / b[m - 1];
  if (m >= 2) x[m - 2] = (r[m - 2] - c[m - 2] * x[m - 1]) / b[m - 2];
  for (std::size_t i = m - 2; i-- > 0;)
    x[i] = (r[i] - c[i] * x[i + 1] - c2[i] * x[i + 2]) / b[i];
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += (long double)a[i] * (long double)b[i];
  return (double)s;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& u : basis) {
    double p = dot(v, u);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * u[i];
  }
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

double eigen_residual_2norm(const DiscreteOperator& op, const std::vector<double>& v,
                            double lambda) {
  const std::size_t m = v.size();
  long double s = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    long double t = ((long double)op.diag[i] - (long double)lambda) * v[i];
    if (i > 0) t += (long double)op.off[i - 1] * v[i - 1];
    if (i + 1 < m) t += (long double)op.off[i] * v[i + 1];
    s += t * t;
  }
  return (double)std::sqrt(s);
}

}  // namespace

std::vector<EigenPair> lowest_eigenpairs(const std::vector<double>& v, double h, int k,
                                         unsigned seed) {
  if (k > 10) throw std::invalid_argument("lowest_eigenpairs: at most 10 levels supported");
  DiscreteOperator op = discretize(v, h);
  std::vector<double> vals = lowest_eigenvalues(op, k);

  std::vector<EigenPair> out;
  std::vector<std::vector<double>> basis;
  const std::size_t m = op.diag.size();
  for (int j = 0; j < k; ++j) {
    double lambda = vals[(std::size_t)j];
    std::mt19937_64 rng(seed + 1000003u * (unsigned)j);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    std::vector<double> w;
    bool converged = false;
    for (int attempt = 0; attempt < 3 && !converged; ++attempt) {
      double shift = lambda * (1.0 + attempt * 1e-10) + attempt * 1e-12;
      w.assign(m, 0.0);
      for (double& val : w) val = uni(rng);
      orthogonalize(w, basis);
      double n = norm2(w);
      for (double& val : w) val /= n;
      for (int it = 0; it < 2; ++it) {
        w = solve_shifted(op.diag, op.off, shift, std::move(w));
        orthogonalize(w, basis);
        n = norm2(w);
        if (!(n > 0.0)) break;
        for (double& val : w) val /= n;
      }
      converged = eigen_residual_2norm(op, w, lambda) < 1e-8 * std::max(1.0, std::fabs(lambda));
    }
    if (!converged)
      throw std::runtime_error("inverse iteration failed to converge for level " +
                               std::to_string(j));
    basis.push_back(w);

    EigenPair p;
    p.value = lambda;
    p.vec.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) p.vec[i + 1] = w[i];
    p.vec = normalize_state(std::move(p.vec), h);
    out.push_back(std::move(p));
  }
  return out;
}

double residual(const std::vector<double>& v, const std::vector<double>& psi, double e,
                double h) {
  if (v.size() != psi.size()) throw std::invalid_argument("residual: size mismatch");
  std::vector<double> d2 = num::derivative2(psi, h);
  double peak = 0.0;
  for (double p : psi) peak = std::max(peak, std::fabs(p));
  if (peak == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < psi.size(); ++i)
    worst = std::max(worst, std::fabs(-0.5 * d2[i] + (v[i] - e) * psi[i]));
  return worst / peak;
}

int count_nodes(const std::vector<double>& psi) {
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::fabs(v));
  const double floor = 1e-9 * peak;
  int last = 0, flips = 0;
  for (double v : psi) {
    if (std::fabs(v) <= floor) continue;
    int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++flips;
    last = s;
  }
  return flips;
}

std::vector<double> refine_samples(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 4) throw std::invalid_argument("refine_samples: need at least 4 samples");
  std::vector<double> out(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) out[2 * i] = v[i];
  auto mid = [&](std::size_t i) -> double {  // between i and i+1
    if (i == 0) return (5.0 * v[0] + 15.0 * v[1] - 5.0 * v[2] + v[3]) / 16.0;
    if (i + 2 >= n) return (v[n - 4] - 5.0 * v[n - 3] + 15.0 * v[n - 2] + 5.0 * v[n - 1]) / 16.0;
    return (-v[i - 1] + 9.0 * v[i] + 9.0 * v[i + 1] - v[i + 2]) / 16.0;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) out[2 * i + 1] = mid(i);
  return out;
}

SpectrumReport verify_model(const QesModel& m, const VerifyTolerances& tol) {
  SpectrumReport rep;
  const double h = m.grid.h();

  int k = std::min(tol.levels, m.bound_states);
  k = std::min(k, 3);
  std::vector<double> expected;
  for (int j = 0; j < k; ++j) {
    double e = m.energies[(std::size_t)j];
    if (m.continuum_edge && e >= *m.continuum_edge - 1e-3) {
      rep.notes.push_back("level " + std::to_string(j) +
                          " sits at the continuum edge; skipped");
      break;
    }
    expected.push_back(e);
  }
  rep.levels = (int)expected.size();

  std::vector<EigenPair> coarse =
      lowest_eigenpairs(m.v, h, std::max(rep.levels, 1), tol.seed);
  for (const auto& p : coarse) rep.eigenvalues.push_back(p.value);

  if (tol.richardson) {
    std::vector<double> v2 = refine_samples(m.v);
    DiscreteOperator op2 = discretize(v2, h / 2.0);
    rep.eigenvalues_fine = lowest_eigenvalues(op2, std::max(rep.levels, 1));
    for (std::size_t j = 0; j < rep.eigenvalues.size(); ++j)
      rep.refined.push_back((4.0 * rep.eigenvalues_fine[j] - rep.eigenvalues[j]) / 3.0);
  } else {
    rep.refined = rep.eigenvalues;
  }

  bool ok = true;
  for (std::size_t j = 0; j < expected.size(); ++j) {
    LevelVerdict lv;
    lv.expected = expected[j];
    lv.fd = rep.eigenvalues[j];
    lv.refined = rep.refined[j];
    lv.error = std::fabs(lv.refined - lv.expected);
    lv.pass = lv.error <= tol.eigenvalue * std::max(1.0, std::fabs(lv.expected));
    ok = ok && lv.pass;
    rep.level_checks.push_back(lv);
  }

  const std::vector<double>* psis[3] = {&m.psi0, &m.psi1, &m.psi2};
  for (int j = 0; j < rep.levels; ++j) {
    const std::vector<double>& psi = *psis[j];
    if (psi.empty()) continue;
    double r = residual(m.v, psi, m.energies[(std::size_t)j], h);
    rep.residuals.push_back(r);
    ok = ok && r <= tol.residual_max;
    int nodes = count_nodes(psi);
    rep.node_counts.push_back(nodes);
    ok = ok && nodes == j;
  }

  for (int a = 0; a < rep.levels; ++a) {
    if (psis[a]->empty()) continue;
    for (int b = a; b < rep.levels; ++b) {
      if (psis[b]->empty()) continue;
      double ip = inner_product(*psis[a], *psis[b], m.grid);
      if (a == b)
        rep.gram_max_diag_err = std::max(rep.gram_max_diag_err, std::fabs(ip - 1.0));
      else
        rep.gram_max_offdiag = std::max(rep.gram_max_offdiag, std::fabs(ip));
    }
  }
  ok = ok && rep.gram_max_offdiag <= tol.gram_offdiag;
  ok = ok && rep.gram_max_diag_err <= 1e-6;

  rep.pass = ok;
  return rep;
}

}  // namespace qeskit
