#pragma once

#include "sreels/ladder.hpp"
#include "sreels/scattering.hpp"
#include "sreels/spectrum.hpp"

namespace sreels {

// P_l = sum_m weight_m D[l][m]; exact for pure and diagonal ladder states
// (the final emitter index fixes the path, so no cross terms survive).
EELSSpectrum spectrum_from_ladder(const ScatteringKernel& kernel, const LadderState& st);

// Electron marginal of a joint state.
EELSSpectrum spectrum_from_joint(const JointState& joint, double hbar_omega0_ev = 1.0);

// Shaped incoming electron: coherent over paths reaching the same final
// (electron sideband, ladder state), incoherent over final ladder states:
//   P_l' = sum_n | sum_m g_{l'-(n-m)} c_m s[n][m] |^2.
EELSSpectrum spectrum_shaped(const ScatteringKernel& kernel, const LadderState& st,
                             const ElectronComb& comb);

// g_eff = std(l)/sqrt(2) in sideband units (hbar*omega0 factors out).
double effective_coupling(const EELSSpectrum& sp);

}  // namespace sreels
