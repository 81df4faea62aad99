#pragma once

#include <vector>

#include "sreels/constants.hpp"

namespace sreels {

// Electron kinematics.  gamma is derived from beta on construction.
struct ElectronParams {
  double beta = 0.0;
  double gamma = 0.0;

  static ElectronParams from_beta(double beta);

  double velocity_nm_fs() const { return beta * constants::c_nm_per_fs; }
};

// N identical two-level emitters along the electron trajectory.
// positions are strictly increasing; impact parameters are all positive.
struct EmitterEnsemble {
  int count = 0;
  double hbar_omega0_ev = 0.0;       // transition energy
  double d_perp = 0.0, d_z = 0.0;    // transition dipole components, e*nm
  std::vector<double> positions_nm;
  std::vector<double> impact_params_nm;
  double refractive_index = 1.0;     // host medium for the excitation pulse

  double omega0_rad_fs() const { return hbar_omega0_ev / constants::hbar_ev_fs; }
  double lambda0_nm() const {
    return 2.0 * constants::pi * constants::hbar_c_ev_nm / hbar_omega0_ev;
  }
  // omega0 z_i / v for each emitter (the electron transit phases).
  std::vector<double> electron_phases(const ElectronParams& e) const;

  void validate() const;  // throws ValidationError

  static EmitterEnsemble equally_spaced(int count, double hbar_omega0_ev,
                                        double spacing_nm, double impact_param_nm,
                                        double d_perp, double d_z,
                                        double refractive_index = 1.0);
};

}  // namespace sreels
