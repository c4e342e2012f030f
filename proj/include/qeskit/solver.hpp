#pragma once

#include <string>
#include <vector>

#include "qeskit/states.hpp"

namespace qeskit {

// Symmetric tridiagonal discretization of -1/2 d^2/dx^2 + V on interior
// points with Dirichlet boundaries.
struct DiscreteOperator {
  std::vector<double> diag;  // 1/h^2 + V(x_i), i = 1..N-2
  std::vector<double> off;   // -1/(2 h^2), size diag.size() - 1
  double h = 0.0;
};

DiscreteOperator discretize(const std::vector<double>& v, double h);

// Number of eigenvalues strictly below lambda (Sturm sequence count).
int sturm_count_below(const DiscreteOperator& op, double lambda);

// k smallest eigenvalues by bisection on the Sturm count, ascending.
std::vector<double> lowest_eigenvalues(const DiscreteOperator& op, int k);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vec;  // full grid length (boundary zeros), Simpson-normalized
};

// Eigenvalues by Sturm bisection, eigenvectors by inverse iteration from a
// seeded random start, reorthogonalized against the already-found vectors.
std::vector<EigenPair> lowest_eigenpairs(const std::vector<double>& v, double h, int k,
                                         unsigned seed = 42);

// max over the interior (excluding 3 points at each edge) of
// |-1/2 D4 psi + (V - E) psi| / max|psi| with the 4th-order second-derivative
// stencil D4.
double residual(const std::vector<double>& v, const std::vector<double>& psi, double e,
                double h);

// Strict sign changes above a 1e-9 * max|psi| noise floor.
int count_nodes(const std::vector<double>& psi);

struct LevelVerdict {
  double expected = 0.0;
  double fd = 0.0;       // coarse-grid eigenvalue
  double refined = 0.0;  // Richardson extrapolation (== fd when disabled)
  double error = 0.0;    // |refined - expected|
  bool pass = false;
};

struct SpectrumReport {
  bool pass = false;
  int levels = 0;
  std::vector<double> eigenvalues;       // coarse grid
  std::vector<double> eigenvalues_fine;  // 2N-1 point grid (empty if disabled)
  std::vector<double> refined;
  std::vector<LevelVerdict> level_checks;
  std::vector<double> residuals;  // analytic states against the sampled V
  std::vector<int> node_counts;
  double gram_max_offdiag = 0.0;
  double gram_max_diag_err = 0.0;
  std::vector<std::string> notes;
};

struct VerifyTolerances {
  double eigenvalue = 5e-4;   // |refined - expected| <= eigenvalue * max(1, |expected|)
  double residual_max = 1e-5;
  double gram_offdiag = 1e-6;
  int levels = 3;
  bool richardson = true;
  unsigned seed = 42;
};

// Cross-checks a model against the independent finite-difference oracle:
// eigenvalues vs the analytic energies, residuals of the analytic states,
// Gram matrix, and node counts.
SpectrumReport verify_model(const QesModel& m, const VerifyTolerances& tol = {});

// Cubic midpoint refinement of samples: 2n-1 values on the halved spacing.
std::vector<double> refine_samples(const std::vector<double>& v);

}  // namespace qeskit
