#pragma once

#include <complex>
#include <vector>

namespace sreels {

// Electron energy spectrum over integer loss index l in [-l_max, l_max],
// in quanta of hbar*omega0.  l > 0: the electron lost l quanta.
// Stored dense with explicit zeros; l_max is N for the standard paths and
// may be larger for shaped-electron output.
struct EELSSpectrum {
  int l_max = 0;
  double hbar_omega0_ev = 1.0;
  std::vector<double> probability;  // size 2*l_max+1, index l + l_max

  static EELSSpectrum zeros(int l_max);

  double at_loss(int l) const { return probability[l + l_max]; }
  double& at_loss(int l) { return probability[l + l_max]; }

  double total() const;
  double mean_loss() const;
  double variance() const;

  void validate() const;  // normalization and nonnegativity, 1e-10
};

// Incoming electron prepared as a finite energy comb:
// |psi_e> = sum_k g_k |E0 + k hbar omega0>, sum |g_k|^2 = 1.
struct ElectronComb {
  int k_min = 0;
  std::vector<std::complex<double>> amplitudes;  // index k - k_min

  int k_max() const { return k_min + static_cast<int>(amplitudes.size()) - 1; }
  void validate() const;

  static ElectronComb delta();  // single tooth at k = 0
};

}  // namespace sreels
