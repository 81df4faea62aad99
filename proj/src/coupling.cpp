#include "sreels/coupling.hpp"

#include <cmath>
#include <string>

#include "sreels/errors.hpp"
#include "sreels/special_functions.hpp"

namespace sreels {

std::complex<double> coupling_constant(const ElectronParams& e,
                                       const EmitterEnsemble& ens,
                                       int emitter_index) {
  if (emitter_index < 0 || emitter_index >= ens.count)
    throw ValidationError("coupling_constant: emitter index out of range");
  const double r_perp = ens.impact_params_nm[emitter_index];
  if (!(r_perp > 0.0)) throw ValidationError("coupling_constant: impact parameter must be > 0");

  if (ens.d_perp == 0.0 && ens.d_z == 0.0) return {0.0, 0.0};

  const double omega_over_c = ens.omega0_rad_fs() / constants::c_nm_per_fs;  // 1/nm
  const double x = omega_over_c * r_perp / (e.gamma * e.beta);
  const double magnitude =
      (2.0 * constants::fine_structure / (e.beta * e.beta)) * omega_over_c *
      (ens.d_perp * bessel_k1(x) + (ens.d_z / e.gamma) * bessel_k0(x));
  const double phase = -ens.omega0_rad_fs() * ens.positions_nm[emitter_index] /
                       e.velocity_nm_fs();
  return magnitude * std::complex<double>(std::cos(phase), std::sin(phase));
}

CouplingSet coupling_set(const ElectronParams& e, const EmitterEnsemble& ens) {
  ens.validate();
  CouplingSet cs;
  cs.g.reserve(ens.count);
  for (int i = 0; i < ens.count; ++i) cs.g.push_back(coupling_constant(e, ens, i));
  cs.uniform_magnitude = true;
  const double g0 = std::abs(cs.g.front());
  for (const auto& gi : cs.g) {
    const double scale = std::max(std::abs(gi), g0);
    if (scale > 0.0 && std::abs(std::abs(gi) - g0) > 1e-12 * scale) {
      cs.uniform_magnitude = false;
      break;
    }
  }
  return cs;
}

}  // namespace sreels
