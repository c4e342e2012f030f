#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qeskit/function.hpp"
#include "qeskit/grid.hpp"
#include "qeskit/superpot.hpp"

namespace qeskit {

// One widening step: from a superpotential triple (gaps epsilon, epsilon1)
// to the isospectral pair (v_minus, v_plus) that drops the source's two
// lowest excited levels. Sign convention is reversed relative to the QES
// pair: v_plus carries the normalizable zero mode exp(+int calw).
struct ChainStep {
  SuperTriple source;
  SmoothFn u;        // generator (W0+W1)*(W1+W2) of the source
  SmoothFn r0;       // branch ratio reproducing the source pair
  SmoothFn calw;     // partner superpotential; finite when V- is regular
  SmoothFn v_minus;  // equals the second-pair upper potential shifted by offset
  SmoothFn v_plus;
  double offset = 0.0;  // epsilon + epsilon1
};

// Builds the step from a triple. The scan interval is searched for zeros of
// the denominator U'(x)*r0(x); around each zero the (removable) ratio is
// replaced by an 8-node polynomial patch. A sign change of 2*epsilon + U or
// a branch ratio vanishing on an interval throws std::domain_error.
ChainStep make_chain_step(const SuperTriple& t, Interval scan = {-40.0, 40.0});

// The partner superpotential alone.
SmoothFn partner_superpotential(const SuperTriple& t, Interval scan = {-40.0, 40.0});

// (v_minus, v_plus) = (w^2 -+ w')/2 for any superpotential.
std::pair<SmoothFn, SmoothFn> partner_potentials(const SmoothFn& w);

// Normalized zero mode exp(+int w dx) of the v_plus member.
std::vector<double> partner_ground_state(const SmoothFn& calw, const Grid& grid);

// Intertwining map between partner eigenfunctions:
//   up:   (d/dx + calw) psi / sqrt(2*energy)
//   down: (-d/dx + calw) psi / sqrt(2*energy)
// energy must be positive.
std::vector<double> map_eigenfunction(const SmoothFn& calw, const std::vector<double>& psi,
                                      double energy, bool up, const Grid& grid);

// Closed ladder of the harmonic-well chain, evaluated in real arithmetic via
// the sign-flipped Hermite recurrence G_{k+1} = 2y G_k + 2k G_{k-1}.
// G_{2n} > 0 for real y, so the forms are pole-free.
double oscillator_chain_potential(int n, double eps, double x);  // structured member, n >= 1
double oscillator_base_potential(int n, double eps, double x);   // eps^2 x^2/2 + (2n - 1/2) eps
double oscillator_chain_w0(int n, double eps, double x);         // left superpotential, n >= 0

// G_0..G_kmax of the sign-flipped Hermite family (unscaled; moderate kmax).
std::vector<long double> hermite_g(int kmax, long double y);

// Printed closed forms of the exponential-well chain, n in {0,1,2}.
// Returns (structured member, plain member). Requires eps > n + 1/2 and
// throws std::domain_error if a printed denominator vanishes at x.
std::pair<double, double> morse_chain_potential(int n, double eps, double x);

// Printed branch ratio of the exponential-well chain (genuine pole where
// 2 e^{-x} + 1 - 2 eps vanishes).
double morse_r0(double eps, double x);

enum class ChainFamily { oscillator, morse };

// Runs `steps` consecutive widening steps starting from a closed family.
// Oscillator admits any depth; the exponential family needs eps > 2*steps-1.
std::vector<ChainStep> iterate_chain(ChainFamily family, int steps, double eps);
std::vector<ChainStep> iterate_chain(const std::string& family, int steps, double eps);

}  // namespace qeskit
