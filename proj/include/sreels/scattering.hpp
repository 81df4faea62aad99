#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sreels/coupling.hpp"
#include "sreels/ensemble.hpp"
#include "sreels/ladder.hpp"
#include "sreels/spectrum.hpp"

namespace sreels {

// Ladder scattering matrix for uniform coupling g: s[n][m] = <n|S|m>, the
// electron sideband shift b^{n-m} excluded (it is fixed by n - m).  The loss
// kernel is D[l][m] = |s[m+l][m]|^2.
struct ScatteringKernel {
  int n_emitters = 0;
  std::complex<double> g;
  std::vector<std::complex<double>> s;  // (N+1)x(N+1), row-major, s[n*(N+1)+m]

  std::complex<double> element(int n, int m) const {
    return s[static_cast<std::size_t>(n) * (n_emitters + 1) + m];
  }
  double loss_probability(int loss, int initial_m) const;
  double column_norm_defect() const;  // max_m |sum_n |s[n][m]|^2 - 1|

  std::string to_json() const;
  static ScatteringKernel from_json(const std::string& text);
};

// Exact kernel, evaluated as exp(i|g|(S+ + S-)) by eigendecomposition of the
// symmetric tridiagonal ladder generator; arg(g) enters covariantly as
// e^{i(n-m) arg g}.  Domain: N >= 1, |g| <= pi/2.
ScatteringKernel exact_elements(int n_emitters, std::complex<double> g);

// Same element from the closed-form alternating k-sum, evaluated in sin/cos
// power form with log-gamma factors and compensated summation.  Stable for
// moderate N*|g|; used to cross-check exact_elements against the printed
// formula.  The electron-shift factor is excluded, as in ScatteringKernel.
std::complex<double> series_element(int n_emitters, std::complex<double> g, int n, int m);

// PINEM-limit spectrum P_l = J_l(2 g_mag sqrt(N m - m^2))^2 for a ladder
// state far from the edges; tail below 1e-12 clipped, then renormalized.
// Domain: 0 < m < N.
EELSSpectrum bessel_approx_spectrum(int n_emitters, int m, double g_mag);

// Joint electron+emitter state on the full 2^N space, stored in blocks of
// the conserved charge c = n_exc - loss.  Within a block the electron
// sideband is implied: loss(config) = popcount(config) - c.
struct JointState {
  int n_emitters = 0;
  int charge_min = 0;
  std::vector<std::vector<std::complex<double>>> blocks;  // each of size 2^N

  int charge_count() const { return static_cast<int>(blocks.size()); }
  double total_norm() const;
  double mean_excitation() const;
  // Probability of each loss value; spans every loss reachable from the
  // stored charges.
  EELSSpectrum electron_marginal(double hbar_omega0_ev = 1.0) const;
};

// Applies exp(i sum_j (a_j sigma+_j b + a_j^* sigma-_j b+)) exactly (adaptive
// scaled Taylor action per charge block), with the raising coefficients taken
// in the electron frame: a_j = g_j e^{+2i omega0 z_j / v}, which flips the
// positional phase of Eq-style couplings so that tilted-pulse product states
// with azimuth omega0 z_j/v + delta are the phase-matched family.
// Capacity: N <= 16.
JointState full_evolution(const CouplingSet& coupl, const ProductState& initial,
                          const EmitterEnsemble& ens, const ElectronParams& e);
JointState full_evolution(const CouplingSet& coupl, const LadderState& initial,
                          const EmitterEnsemble& ens, const ElectronParams& e);

// Shaped-electron variant: the incoming electron starts as a sideband comb.
JointState full_evolution_shaped(const CouplingSet& coupl, const LadderState& initial,
                                 const ElectronComb& comb, const EmitterEnsemble& ens,
                                 const ElectronParams& e);

}  // namespace sreels
