#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sreels/ensemble.hpp"
#include "sreels/ladder.hpp"
#include "sreels/scattering.hpp"
#include "sreels/spectrum.hpp"

namespace sreels {

// Dicke rate-equation cascade on the ladder populations:
//   dp_m/dt = Gamma [ (m+1)(N-m) p_{m+1} - m(N-m+1) p_m ].
struct DickeTrajectory {
  int n_emitters = 0;
  double gamma_rate = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> populations;  // [time][m]
  std::vector<double> intensity;                 // Gamma sum_m m(N-m+1) p_m
  std::vector<double> mean_m;

  // Populations at an arbitrary delay inside the integrated range
  // (linear interpolation between stored samples).
  std::vector<double> populations_at(double t) const;
};

DickeTrajectory dicke_cascade(int n_emitters, double gamma_rate,
                              const LadderState& initial, std::span<const double> times);

// Semiclassical trajectories for long-sample superradiance from the fully
// inverted state.  Per spin: s_z real, sigma complex, with
//   dsigma_i/dt = Gamma s_z_i F_i,   ds_z_i/dt = -4 Gamma Re(sigma_i^* F_i),
//   F_i = sigma_i/2 + sum_{j<i} e^{i omega0 (z_i - z_j)/v} sigma_j,
// which conserves s_z^2 + 4|sigma|^2 per spin exactly.  Initial conditions
// per trajectory: s_z = 1 - 2 eps^2 and sigma = eps e^{i eta} with eta
// uniform per spin; the small trigger magnitude eps keeps the emitted total
// at N quanta while the random phases seed the fluctuating emission.
struct TWAEnsemble {
  int n_emitters = 0;
  int trajectories = 0;
  std::uint64_t seed = 0;
  double gamma_rate = 0.0;
  double trigger_eps = 0.0;
  std::vector<double> times;
  std::vector<double> mean_intensity;            // ensemble average of I(t)
  std::vector<std::vector<double>> inversion;    // [trajectory][time]: m(t)
  std::vector<double> peak_time;                 // per trajectory argmax I
  std::vector<double> emitted_total;             // per trajectory, RK4-integrated I dt
  std::vector<double> spin_length_drift;         // per trajectory max |C(t)-C(0)|

  double mean_peak_time() const;
  double mean_emitted_total() const;
};

TWAEnsemble twa_long_sample(const EmitterEnsemble& ens, double gamma_rate,
                            int trajectories, std::uint64_t seed,
                            std::span<const double> times, double trigger_eps = 0.02,
                            int n_threads = 0);

// Electron spectra probing the relaxation at the given delays.
std::vector<EELSSpectrum> timeline_eels(const DickeTrajectory& dyn,
                                        const ScatteringKernel& kernel,
                                        std::span<const double> delays);
// TWA path: per trajectory the inversion is rounded to the nearest ladder
// index (or split between the neighboring ones with interpolate = true).
std::vector<EELSSpectrum> timeline_eels(const TWAEnsemble& dyn,
                                        const ScatteringKernel& kernel,
                                        std::span<const double> delays,
                                        bool interpolate = false);

}  // namespace sreels
