#include "sreels/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sreels/eels.hpp"
#include "sreels/errors.hpp"
#include "sreels/scattering.hpp"

namespace sreels {

namespace {

// Wrap an angle into [0, 2pi).
double wrap_2pi(double a) {
  const double two_pi = 2.0 * constants::pi;
  a = std::fmod(a, two_pi);
  return a < 0.0 ? a + two_pi : a;
}

}  // namespace

ExcitationPulse ExcitationPulse::from_duration(double tilt_angle_rad, double duration_fs,
                                               double rabi_rate_rad_fs) {
  if (!(duration_fs >= 0.0)) throw ValidationError("pulse.tau must be >= 0");
  if (!(rabi_rate_rad_fs > 0.0)) throw ValidationError("pulse.rabi_rate must be > 0");
  ExcitationPulse p;
  p.tilt_angle_rad = tilt_angle_rad;
  p.area_rad = rabi_rate_rad_fs * duration_fs;
  p.validate();
  return p;
}

void ExcitationPulse::validate() const {
  if (!(tilt_angle_rad >= 0.0) || !(tilt_angle_rad <= 0.5 * constants::pi + 1e-12))
    throw ValidationError("pulse.theta must lie in [0, pi/2]");
}

ProductState excite(const EmitterEnsemble& ens, const ExcitationPulse& pulse) {
  ens.validate();
  pulse.validate();
  const double k_tilt = ens.omega0_rad_fs() * ens.refractive_index *
                        std::cos(pulse.tilt_angle_rad) / constants::c_nm_per_fs;

  // Reduce the rotation to a canonical Bloch polar angle in [0, pi]; areas
  // beyond pi flip the azimuth by pi instead.
  double polar = std::fmod(pulse.area_rad, 2.0 * constants::pi);
  if (polar < 0.0) polar += 2.0 * constants::pi;
  double azimuth_shift = 0.0;
  if (polar > constants::pi) {
    polar = 2.0 * constants::pi - polar;
    azimuth_shift = constants::pi;
  }

  ProductState st;
  st.polar.assign(ens.count, polar);
  st.azimuth.resize(ens.count);
  for (int i = 0; i < ens.count; ++i)
    st.azimuth[i] = wrap_2pi(k_tilt * ens.positions_nm[i] + azimuth_shift);
  return st;
}

std::optional<double> cherenkov_angle(const ElectronParams& e, double refractive_index) {
  if (!(refractive_index >= 1.0)) throw ValidationError("refractive index must be >= 1");
  const double nb = refractive_index * e.beta;
  if (nb < 1.0) return std::nullopt;
  return std::acos(1.0 / nb);
}

std::vector<double> dipole_map(const EmitterEnsemble& ens, const ElectronParams& e,
                               std::span<const double> theta_grid) {
  if (theta_grid.empty()) throw ValidationError("dipole_map: empty angle grid");
  ens.validate();
  const double omega0 = ens.omega0_rad_fs();
  const double inv_v = 1.0 / e.velocity_nm_fs();
  std::vector<double> out;
  out.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    const double k = omega0 * (ens.refractive_index * std::cos(theta) / constants::c_nm_per_fs -
                               inv_v);
    std::complex<double> sum = 0.0;
    for (double z : ens.positions_nm)
      sum += std::complex<double>(std::cos(k * z), std::sin(k * z));
    out.push_back(std::norm(sum));
  }
  return out;
}

std::vector<double> resonance_angles(const EmitterEnsemble& ens, const ElectronParams& e,
                                     int q_min, int q_max) {
  ens.validate();
  if (ens.count < 2) throw ValidationError("resonance_angles: needs at least two emitters");
  const double dz = ens.positions_nm[1] - ens.positions_nm[0];
  for (int i = 1; i < ens.count; ++i)
    if (std::abs((ens.positions_nm[i] - ens.positions_nm[i - 1]) - dz) > 1e-9)
      throw ValidationError("resonance_angles: emitter spacing is not equal");

  const double base = 1.0 / (ens.refractive_index * e.beta);
  const double step = ens.lambda0_nm() / (ens.refractive_index * dz);
  std::vector<double> out;
  for (int q = q_min; q <= q_max; ++q) {
    const double c = base + q * step;
    if (c >= 0.0 && c <= 1.0) out.push_back(std::acos(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

CouplingSet sweep_couplings(const EmitterEnsemble& ens, const ElectronParams& e,
                            const std::optional<double>& override_mag) {
  if (!override_mag) return coupling_set(e, ens);
  if (!(*override_mag >= 0.0)) throw ValidationError("coupling override must be >= 0");
  CouplingSet cs;
  cs.uniform_magnitude = true;
  const auto chi = ens.electron_phases(e);
  cs.g.reserve(ens.count);
  for (double c : chi)
    cs.g.push_back(*override_mag * std::complex<double>(std::cos(c), -std::sin(c)));
  return cs;
}

}  // namespace

SweepResult sweep(const EmitterEnsemble& ens, const ElectronParams& e,
                  std::span<const double> theta_grid, std::span<const double> tau_grid,
                  double rabi_rate_rad_fs, SweepPathway pathway,
                  std::optional<double> coupling_override, int n_threads) {
  ens.validate();
  if (theta_grid.empty() || tau_grid.empty())
    throw ValidationError("sweep: grids must be non-empty");
  for (std::size_t i = 1; i < theta_grid.size(); ++i)
    if (!(theta_grid[i] > theta_grid[i - 1]))
      throw ValidationError("sweep: angle grid must be strictly increasing");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1]))
      throw ValidationError("sweep: duration grid must be strictly increasing");
  if (!(rabi_rate_rad_fs > 0.0)) throw ValidationError("sweep: rabi rate must be > 0");

  const CouplingSet coupl = sweep_couplings(ens, e, coupling_override);
  const auto chi = ens.electron_phases(e);

  // The kernel only depends on (N, |g|); reuse it across matched grid points.
  ScatteringKernel kernel;
  bool have_kernel = false;
  if (coupl.uniform_magnitude) {
    kernel = exact_elements(ens.count, std::abs(coupl.g.front()));
    have_kernel = true;
  }

  SweepResult result;
  result.theta_rad.assign(theta_grid.begin(), theta_grid.end());
  result.tau_fs.assign(tau_grid.begin(), tau_grid.end());
  result.rabi_rate_rad_fs = rabi_rate_rad_fs;
  result.g_eff.assign(theta_grid.size(), std::vector<double>(tau_grid.size(), 0.0));
  result.dipole_sq_norm = dipole_map(ens, e, theta_grid);
  try {
    result.resonance_theta = resonance_angles(ens, e, -64, 64);
  } catch (const ValidationError&) {
    result.resonance_theta.clear();  // unequal spacing: no annotation
  }

  const auto evaluate_point = [&](std::size_t it, std::size_t jt) {
    ExcitationPulse pulse;
    pulse.tilt_angle_rad = theta_grid[it];
    pulse.area_rad = rabi_rate_rad_fs * tau_grid[jt];
    const ProductState st = excite(ens, pulse);
    if (pathway == SweepPathway::ladder_fast && have_kernel) {
      if (auto ladder = product_to_ladder(st, chi)) {
        result.g_eff[it][jt] = effective_coupling(spectrum_from_ladder(kernel, *ladder));
        return;
      }
    }
    const JointState joint = full_evolution(coupl, st, ens, e);
    result.g_eff[it][jt] = effective_coupling(joint.electron_marginal());
  };

  std::vector<std::pair<std::size_t, std::size_t>> points;
  points.reserve(theta_grid.size() * tau_grid.size());
  for (std::size_t it = 0; it < theta_grid.size(); ++it)
    for (std::size_t jt = 0; jt < tau_grid.size(); ++jt) points.emplace_back(it, jt);

  unsigned workers = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, points.size());
  if (workers <= 1) {
    for (const auto& [it, jt] : points) evaluate_point(it, jt);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (std::size_t p = w; p < points.size(); p += workers)
            evaluate_point(points[p].first, points[p].second);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  double best = -1.0;
  for (std::size_t it = 0; it < theta_grid.size(); ++it)
    for (std::size_t jt = 0; jt < tau_grid.size(); ++jt)
      if (result.g_eff[it][jt] > best) {
        best = result.g_eff[it][jt];
        result.argmax_theta = static_cast<int>(it);
        result.argmax_tau = static_cast<int>(jt);
      }
  return result;
}

bool within_coherence_window(double electron_delay_fs, double t2_star_fs) {
  return electron_delay_fs <= t2_star_fs;
}

}  // namespace sreels
