#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sreels/coupling.hpp"
#include "sreels/ensemble.hpp"
#include "sreels/ladder.hpp"

namespace sreels {

// Tilted-wavefront resonant pulse: carrier at omega0, propagating through the
// host medium at angle theta from the emitter line.
struct ExcitationPulse {
  double tilt_angle_rad = 0.0;  // in [0, pi/2]
  double area_rad = 0.0;        // integrated Rabi rotation

  static ExcitationPulse from_duration(double tilt_angle_rad, double duration_fs,
                                       double rabi_rate_rad_fs);
  void validate() const;
};

// Every emitter is rotated by the pulse area; the wavefront tilt imprints the
// carrier phase at arrival: phi_i = (omega0 n cos(theta)/c) z_i.
ProductState excite(const EmitterEnsemble& ens, const ExcitationPulse& pulse);

// Cherenkov phase-matching angle arccos(1/(n beta)), or nullopt when
// n*beta < 1 (no phase matching possible).
std::optional<double> cherenkov_angle(const ElectronParams& e, double refractive_index);

// |sum_i exp(i omega0 z_i (n cos(theta)/c - 1/v))|^2 per grid angle,
// normalized to the single-emitter dipole (maximum N^2 when all phases align).
std::vector<double> dipole_map(const EmitterEnsemble& ens, const ElectronParams& e,
                               std::span<const double> theta_grid);

// Hybrid resonance angles for equally spaced emitters:
// cos(theta_q) = 1/(n beta) + q lambda0/(n dz), theta in [0, pi/2], q in
// [q_min, q_max].  q = 0 reproduces cherenkov_angle.  Throws ValidationError
// when the spacing is not equal within 1e-9 nm.
std::vector<double> resonance_angles(const EmitterEnsemble& ens, const ElectronParams& e,
                                     int q_min, int q_max);

enum class SweepPathway { exact_full, ladder_fast };

struct SweepResult {
  std::vector<double> theta_rad;
  std::vector<double> tau_fs;
  double rabi_rate_rad_fs = 0.0;
  // g_eff[i_theta][i_tau]; dipole map is tau-independent, stored per angle.
  std::vector<std::vector<double>> g_eff;
  std::vector<double> dipole_sq_norm;
  std::vector<double> resonance_theta;  // annotations (empty for unequal spacing)
  int argmax_theta = 0;
  int argmax_tau = 0;
};

// Excite -> evolve -> g_eff over the (theta, tau) grid.  ladder_fast takes the
// (N+1)-dimensional kernel route wherever the excited state converts onto the
// ladder and falls back to the full 2^N evolution elsewhere; exact_full always
// evolves the full space.  coupling_override replaces the Eq.-1 magnitudes
// with a uniform |g| (the figure protocol), keeping the transit phases.
SweepResult sweep(const EmitterEnsemble& ens, const ElectronParams& e,
                  std::span<const double> theta_grid, std::span<const double> tau_grid,
                  double rabi_rate_rad_fs, SweepPathway pathway,
                  std::optional<double> coupling_override = std::nullopt,
                  int n_threads = 0);

// T2* validity: the probe must arrive while the ensemble is still coherent.
bool within_coherence_window(double electron_delay_fs, double t2_star_fs);

}  // namespace sreels
