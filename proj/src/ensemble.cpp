#include "sreels/ensemble.hpp"

#include <cmath>
#include <string>

#include "sreels/errors.hpp"

namespace sreels {

ElectronParams ElectronParams::from_beta(double beta) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw ValidationError("electron.beta must lie in (0, 1), got " + std::to_string(beta));
  ElectronParams e;
  e.beta = beta;
  e.gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  return e;
}

std::vector<double> EmitterEnsemble::electron_phases(const ElectronParams& e) const {
  const double w_over_v = omega0_rad_fs() / e.velocity_nm_fs();
  std::vector<double> phases(positions_nm.size());
  for (std::size_t i = 0; i < positions_nm.size(); ++i)
    phases[i] = w_over_v * positions_nm[i];
  return phases;
}

void EmitterEnsemble::validate() const {
  if (count < 1) throw ValidationError("ensemble.N must be >= 1");
  if (!(hbar_omega0_ev > 0.0)) throw ValidationError("ensemble.hbar_omega0 must be > 0");
  if (static_cast<int>(positions_nm.size()) != count)
    throw ValidationError("ensemble.positions length must equal N");
  if (static_cast<int>(impact_params_nm.size()) != count)
    throw ValidationError("ensemble.impact_params length must equal N");
  for (int i = 1; i < count; ++i)
    if (!(positions_nm[i] > positions_nm[i - 1]))
      throw ValidationError("ensemble.positions must be strictly increasing");
  for (double r : impact_params_nm)
    if (!(r > 0.0)) throw ValidationError("ensemble.impact_params must all be > 0");
  if (!(refractive_index >= 1.0)) throw ValidationError("ensemble.n must be >= 1");
}

EmitterEnsemble EmitterEnsemble::equally_spaced(int count, double hbar_omega0_ev,
                                                double spacing_nm, double impact_param_nm,
                                                double d_perp, double d_z,
                                                double refractive_index) {
  EmitterEnsemble ens;
  ens.count = count;
  ens.hbar_omega0_ev = hbar_omega0_ev;
  ens.d_perp = d_perp;
  ens.d_z = d_z;
  ens.refractive_index = refractive_index;
  ens.positions_nm.resize(count);
  ens.impact_params_nm.assign(count, impact_param_nm);
  for (int i = 0; i < count; ++i) ens.positions_nm[i] = i * spacing_nm;
  ens.validate();
  return ens;
}

}  // namespace sreels
