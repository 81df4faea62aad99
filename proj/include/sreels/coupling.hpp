#pragma once

#include <complex>
#include <vector>

#include "sreels/ensemble.hpp"

namespace sreels {

struct CouplingSet {
  std::vector<std::complex<double>> g;  // one per emitter, dimensionless
  bool uniform_magnitude = false;       // all |g_i| equal within 1e-12 relative
};

// Electron-emitter coupling constant for one emitter:
//
//   g_i = (2 alpha / beta^2) (omega0/c) [ d_perp K1(x) + (d_z/gamma) K0(x) ]
//         * exp(-i omega0 z_i / v),      x = omega0 r_perp / (gamma v)
//
// with the elementary-charge/permittivity prefactor folded into the fine
// structure constant (e^2/(2 pi eps0) = 2 alpha hbar c).  Dipoles in e*nm.
std::complex<double> coupling_constant(const ElectronParams& e,
                                       const EmitterEnsemble& ens,
                                       int emitter_index);

CouplingSet coupling_set(const ElectronParams& e, const EmitterEnsemble& ens);

}  // namespace sreels
