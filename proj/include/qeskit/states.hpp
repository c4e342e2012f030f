#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeskit/grid.hpp"
#include "qeskit/superpot.hpp"

namespace qeskit {

// A solved model: potential samples plus the three analytic eigenstates.
struct QesModel {
  Grid grid;
  std::vector<double> v;                       // V- on the grid
  std::array<double, 3> energies{0.0, 0.0, 0.0};
  std::vector<double> psi0, psi1, psi2;        // normalized samples
  double epsilon = 0.0;
  double epsilon1 = 0.0;
  std::string description;
  Params params;
  std::optional<double> continuum_edge;        // V(+-inf) if the well saturates
  int bound_states = 3;
};

// Zero mode exp(-int W), exponent anchored near `anchor`, normalized.
// Throws if the endpoint signs of W forbid normalizability.
std::vector<double> ground_state(const SmoothFn& w, const Grid& grid, double anchor = 0.0);

// The first and second excited states assembled from the factorization
// chain; both normalized. Throws when a state fails square-integrability
// (tail mass above 1e-6 in the outer 10% and still growing outward).
std::pair<std::vector<double>, std::vector<double>> excited_states(const SuperTriple& t,
                                                                   const SmoothFn& wplus,
                                                                   const SmoothFn& wtilde,
                                                                   const Grid& grid);

// (-sign*d/dx + W) psi / sqrt(2) with 4th-order finite differences.
std::vector<double> apply_B(const SmoothFn& w, int sign, const std::vector<double>& psi,
                            const Grid& grid);

// Composite Simpson quadrature of a*b over the grid.
double inner_product(const std::vector<double>& a, const std::vector<double>& b,
                     const Grid& grid);

// Simpson-normalize; flip sign so the rightmost lobe is positive.
std::vector<double> normalize_state(std::vector<double> psi, double h);

// Fraction of the total mass of |psi|^2 in the outer `fraction` of the grid
// (both sides combined).
double tail_mass_fraction(const std::vector<double>& psi, double fraction);

// Full pipeline: factor the generator, assemble the three states, and pick a
// grid wide enough that every state decays below 1e-10 of its peak in the
// outer 5% (half-width doubles up to 4 times when `adaptive`).
QesModel build_model(const GeneratorSpec& g, Grid grid, bool adaptive = true);

}  // namespace qeskit
