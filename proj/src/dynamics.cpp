#include "sreels/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <thread>

#include "sreels/errors.hpp"

namespace sreels {

namespace {

// Dormand-Prince 5(4) adaptive step on a population vector.
template <typename Rhs>
void integrate_dp54(const Rhs& rhs, std::vector<double>& y, double t0, double t1,
                    double rel_tol, double abs_tol) {
  if (t1 <= t0) return;
  const int n = static_cast<int>(y.size());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n), y4(n);
  rhs(y, k1);
  double h = (t1 - t0) * 1e-3;
  double t = t0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    const auto stage = [&](const std::vector<double>& base, std::vector<double>& out) {
      rhs(base, out);
    };
    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (0.2 * k1[i]);
    stage(yt, k2);
    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * (3.0 / 40 * k1[i] + 9.0 / 40 * k2[i]);
    stage(yt, k3);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (44.0 / 45 * k1[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
    stage(yt, k4);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (19372.0 / 6561 * k1[i] - 25360.0 / 2187 * k2[i] +
                          64448.0 / 6561 * k3[i] - 212.0 / 729 * k4[i]);
    stage(yt, k5);
    for (int i = 0; i < n; ++i)
      yt[i] = y[i] + h * (9017.0 / 3168 * k1[i] - 355.0 / 33 * k2[i] +
                          46732.0 / 5247 * k3[i] + 49.0 / 176 * k4[i] -
                          5103.0 / 18656 * k5[i]);
    stage(yt, k6);
    for (int i = 0; i < n; ++i) {
      y5[i] = y[i] + h * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] + 125.0 / 192 * k4[i] -
                          2187.0 / 6784 * k5[i] + 11.0 / 84 * k6[i]);
    }
    stage(y5, k7);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      y4[i] = y[i] + h * (5179.0 / 57600 * k1[i] + 7571.0 / 16695 * k3[i] +
                          393.0 / 640 * k4[i] - 92097.0 / 339200 * k5[i] +
                          187.0 / 2100 * k6[i] + 1.0 / 40 * k7[i]);
      const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / scale;
      err = std::max(err, std::abs(e));
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < 1e-15 * (t1 - t0))
      throw DomainError("dicke_cascade: step size collapsed");
  }
}

struct TrajectoryResult {
  std::vector<double> inversion;  // per output time
  std::vector<double> intensity;  // per output time
  double peak_time = 0.0;
  double emitted_total = 0.0;
  double length_drift = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<double> DickeTrajectory::populations_at(double t) const {
  if (times.empty()) throw ValidationError("empty trajectory");
  if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
    throw ValidationError("delay outside the integrated range");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const std::size_t hi = std::min<std::size_t>(
      times.size() - 1, static_cast<std::size_t>(std::distance(times.begin(), it)));
  if (hi == 0) return populations.front();
  const std::size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  const double w = span > 0.0 ? (t - times[lo]) / span : 0.0;
  std::vector<double> p(populations[lo].size());
  for (std::size_t m = 0; m < p.size(); ++m)
    p[m] = (1.0 - w) * populations[lo][m] + w * populations[hi][m];
  return p;
}

DickeTrajectory dicke_cascade(int n_emitters, double gamma_rate,
                              const LadderState& initial, std::span<const double> times) {
  if (!(gamma_rate > 0.0)) throw ValidationError("dicke_cascade: Gamma must be > 0");
  if (initial.size() != n_emitters)
    throw ValidationError("dicke_cascade: initial state size must equal N");
  if (times.empty()) throw ValidationError("dicke_cascade: empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("dicke_cascade: times must be strictly increasing");
  if (times.front() < 0.0) throw ValidationError("dicke_cascade: times must be >= 0");

  const int n = n_emitters;
  const auto rhs = [n, gamma_rate](const std::vector<double>& p, std::vector<double>& dp) {
    for (int m = 0; m <= n; ++m) {
      const double out = static_cast<double>(m) * (n - m + 1) * p[m];
      const double in = m < n ? static_cast<double>(m + 1) * (n - m) * p[m + 1] : 0.0;
      dp[m] = gamma_rate * (in - out);
    }
  };

  DickeTrajectory traj;
  traj.n_emitters = n;
  traj.gamma_rate = gamma_rate;
  traj.times.assign(times.begin(), times.end());
  traj.populations.reserve(times.size());

  std::vector<double> p = initial.weights();
  double t_now = 0.0;
  for (double t_out : times) {
    integrate_dp54(rhs, p, t_now, t_out, 1e-10, 1e-12);
    t_now = t_out;
    traj.populations.push_back(p);
    double intensity = 0.0, mean = 0.0;
    for (int m = 0; m <= n; ++m) {
      intensity += gamma_rate * m * (n - m + 1) * p[m];
      mean += m * p[m];
    }
    traj.intensity.push_back(intensity);
    traj.mean_m.push_back(mean);
  }
  return traj;
}

double TWAEnsemble::mean_peak_time() const {
  double s = 0.0;
  for (double t : peak_time) s += t;
  return s / peak_time.size();
}

double TWAEnsemble::mean_emitted_total() const {
  double s = 0.0;
  for (double e : emitted_total) s += e;
  return s / emitted_total.size();
}

namespace {

TrajectoryResult run_twa_trajectory(int n, double gamma, double eps,
                                    const std::vector<std::complex<double>>& gap_phase,
                                    std::span<const double> times, std::uint64_t stream_seed,
                                    double h_max) {
  std::mt19937_64 eng(stream_seed);
  std::vector<std::complex<double>> sigma(n);
  std::vector<double> sz(n, 1.0 - 2.0 * eps * eps);
  for (int i = 0; i < n; ++i) {
    const double eta = 2.0 * constants::pi * uniform01(eng);
    sigma[i] = eps * std::complex<double>(std::cos(eta), std::sin(eta));
  }
  const double c0 = sz[0] * sz[0] + 4.0 * std::norm(sigma[0]);

  // F_i = sigma_i/2 + u_i sum_{j<i} sigma_j u_j^*, with u_i = e^{i chi_i};
  // the prefix sum keeps each derivative evaluation O(N).
  std::vector<std::complex<double>> f(n);
  const auto field = [&](const std::vector<std::complex<double>>& sig) {
    std::complex<double> prefix = 0.0;
    for (int i = 0; i < n; ++i) {
      f[i] = 0.5 * sig[i] + gap_phase[i] * prefix;
      prefix += sig[i] * std::conj(gap_phase[i]);
    }
  };
  const auto intensity_of = [&](const std::vector<std::complex<double>>& sig) {
    field(sig);
    double isum = 0.0;
    for (int i = 0; i < n; ++i) isum += (std::conj(sig[i]) * f[i]).real();
    return 2.0 * gamma * isum;
  };

  // State layout for RK4: sigma (complex), sz, emitted energy.
  std::vector<std::complex<double>> s_tmp(n);
  std::vector<double> z_tmp(n);
  const auto deriv = [&](const std::vector<std::complex<double>>& sig,
                         const std::vector<double>& zz,
                         std::vector<std::complex<double>>& dsig, std::vector<double>& dz,
                         double& de) {
    field(sig);
    double isum = 0.0;
    for (int i = 0; i < n; ++i) {
      dsig[i] = gamma * zz[i] * f[i];
      const double re = (std::conj(sig[i]) * f[i]).real();
      dz[i] = -4.0 * gamma * re;
      isum += re;
    }
    de = 2.0 * gamma * isum;
  };

  TrajectoryResult res;
  res.inversion.reserve(times.size());
  res.intensity.reserve(times.size());
  double emitted = 0.0;
  double t = 0.0;
  double peak_i = -1.0;

  std::vector<std::complex<double>> d1s(n), d2s(n), d3s(n), d4s(n);
  std::vector<double> d1z(n), d2z(n), d3z(n), d4z(n);
  double d1e, d2e, d3e, d4e;

  const auto record = [&]() {
    double inv = 0.0;
    for (int i = 0; i < n; ++i) inv += 0.5 * (1.0 + sz[i]);
    res.inversion.push_back(inv);
    res.intensity.push_back(intensity_of(sigma));
  };

  std::size_t next_out = 0;
  if (!times.empty() && times[0] <= 0.0) {
    record();
    next_out = 1;
  }
  const double t_end = times.back();
  while (t < t_end) {
    const double t_target = times[next_out];
    const int steps = std::max(1, static_cast<int>(std::ceil((t_target - t) / h_max)));
    const double h = (t_target - t) / steps;
    for (int s = 0; s < steps; ++s) {
      deriv(sigma, sz, d1s, d1z, d1e);
      for (int i = 0; i < n; ++i) {
        s_tmp[i] = sigma[i] + 0.5 * h * d1s[i];
        z_tmp[i] = sz[i] + 0.5 * h * d1z[i];
      }
      deriv(s_tmp, z_tmp, d2s, d2z, d2e);
      for (int i = 0; i < n; ++i) {
        s_tmp[i] = sigma[i] + 0.5 * h * d2s[i];
        z_tmp[i] = sz[i] + 0.5 * h * d2z[i];
      }
      deriv(s_tmp, z_tmp, d3s, d3z, d3e);
      for (int i = 0; i < n; ++i) {
        s_tmp[i] = sigma[i] + h * d3s[i];
        z_tmp[i] = sz[i] + h * d3z[i];
      }
      deriv(s_tmp, z_tmp, d4s, d4z, d4e);
      for (int i = 0; i < n; ++i) {
        sigma[i] += h / 6.0 * (d1s[i] + 2.0 * d2s[i] + 2.0 * d3s[i] + d4s[i]);
        sz[i] += h / 6.0 * (d1z[i] + 2.0 * d2z[i] + 2.0 * d3z[i] + d4z[i]);
      }
      emitted += h / 6.0 * (d1e + 2.0 * d2e + 2.0 * d3e + d4e);
      t += h;
      const double inow = intensity_of(sigma);
      if (inow > peak_i) {
        peak_i = inow;
        res.peak_time = t;
      }
      double drift = 0.0;
      for (int i = 0; i < n; ++i)
        drift = std::max(drift,
                         std::abs(sz[i] * sz[i] + 4.0 * std::norm(sigma[i]) - c0));
      res.length_drift = std::max(res.length_drift, drift);
    }
    t = t_target;
    record();
    ++next_out;
    if (next_out >= times.size()) break;
  }
  res.emitted_total = emitted;
  return res;
}

}  // namespace

TWAEnsemble twa_long_sample(const EmitterEnsemble& ens, double gamma_rate,
                            int trajectories, std::uint64_t seed,
                            std::span<const double> times, double trigger_eps,
                            int n_threads) {
  ens.validate();
  if (!(gamma_rate > 0.0)) throw ValidationError("twa_long_sample: Gamma must be > 0");
  if (trajectories < 1) throw ValidationError("twa_long_sample: M must be >= 1");
  if (times.size() < 2) throw ValidationError("twa_long_sample: need at least two times");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("twa_long_sample: times must be strictly increasing");
  if (times.front() < 0.0) throw ValidationError("twa_long_sample: times must be >= 0");
  if (!(trigger_eps > 0.0) || !(trigger_eps < 0.5))
    throw ValidationError("twa_long_sample: trigger_eps must lie in (0, 0.5)");

  const int n = ens.count;
  // Cascade phases e^{i omega0 z_i / v}: the electron's; v enters only here.
  // The reference speed is immaterial to the ensemble statistics (phases are
  // per-trajectory-random anyway); use the transit phases at beta -> 1.
  std::vector<std::complex<double>> gap_phase(n);
  const double w_over_c = ens.omega0_rad_fs() / constants::c_nm_per_fs;
  for (int i = 0; i < n; ++i) {
    const double chi = w_over_c * ens.positions_nm[i];
    gap_phase[i] = {std::cos(chi), std::sin(chi)};
  }

  const double h_max = 0.01 / (n * gamma_rate);

  TWAEnsemble out;
  out.n_emitters = n;
  out.trajectories = trajectories;
  out.seed = seed;
  out.gamma_rate = gamma_rate;
  out.trigger_eps = trigger_eps;
  out.times.assign(times.begin(), times.end());
  out.inversion.resize(trajectories);
  out.peak_time.resize(trajectories);
  out.emitted_total.resize(trajectories);
  out.spin_length_drift.resize(trajectories);
  out.mean_intensity.assign(times.size(), 0.0);

  std::vector<TrajectoryResult> results(trajectories);
  const auto run_range = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const std::uint64_t stream = splitmix64(seed ^ (0x5851F42D4C957F2Dull * (k + 1)));
      results[k] = run_twa_trajectory(n, gamma_rate, trigger_eps, gap_phase, times,
                                      stream, h_max);
    }
  };

  unsigned workers = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, trajectories);
  if (workers <= 1) {
    run_range(0, trajectories);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (trajectories + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const int b = w * chunk;
      const int e2 = std::min<int>(trajectories, b + chunk);
      if (b < e2) pool.emplace_back(run_range, b, e2);
    }
    for (auto& th : pool) th.join();
  }

  // Deterministic reduction in trajectory order.
  for (int k = 0; k < trajectories; ++k) {
    out.inversion[k] = std::move(results[k].inversion);
    out.peak_time[k] = results[k].peak_time;
    out.emitted_total[k] = results[k].emitted_total;
    out.spin_length_drift[k] = results[k].length_drift;
    for (std::size_t i = 0; i < out.times.size(); ++i)
      out.mean_intensity[i] += results[k].intensity[i] / trajectories;
  }
  return out;
}

std::vector<EELSSpectrum> timeline_eels(const DickeTrajectory& dyn,
                                        const ScatteringKernel& kernel,
                                        std::span<const double> delays) {
  if (kernel.n_emitters != dyn.n_emitters)
    throw ValidationError("timeline_eels: kernel size must match the ensemble");
  std::vector<EELSSpectrum> out;
  out.reserve(delays.size());
  for (double d : delays) {
    auto p = dyn.populations_at(d);
    // Clip integrator noise before the state constructor checks signs.
    double sum = 0.0;
    for (double& v : p) {
      v = std::max(v, 0.0);
      sum += v;
    }
    for (double& v : p) v /= sum;
    out.push_back(spectrum_from_ladder(kernel, LadderState::diagonal(std::move(p))));
  }
  return out;
}

std::vector<EELSSpectrum> timeline_eels(const TWAEnsemble& dyn,
                                        const ScatteringKernel& kernel,
                                        std::span<const double> delays,
                                        bool interpolate) {
  if (kernel.n_emitters != dyn.n_emitters)
    throw ValidationError("timeline_eels: kernel size must match the ensemble");
  const int n = dyn.n_emitters;
  std::vector<EELSSpectrum> out;
  out.reserve(delays.size());
  for (double d : delays) {
    if (d < dyn.times.front() - 1e-12 || d > dyn.times.back() + 1e-12)
      throw ValidationError("timeline_eels: delay outside the integrated range");
    const auto it = std::lower_bound(dyn.times.begin(), dyn.times.end(), d);
    std::size_t hi = std::min<std::size_t>(
        dyn.times.size() - 1, static_cast<std::size_t>(std::distance(dyn.times.begin(), it)));
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    const double span = dyn.times[hi] - dyn.times[lo];
    const double w = span > 0.0 ? (d - dyn.times[lo]) / span : 0.0;

    std::vector<double> weight(n + 1, 0.0);
    for (int k = 0; k < dyn.trajectories; ++k) {
      const double m = (1.0 - w) * dyn.inversion[k][lo] + w * dyn.inversion[k][hi];
      if (interpolate) {
        const int m0 = std::clamp(static_cast<int>(std::floor(m)), 0, n);
        const int m1 = std::min(m0 + 1, n);
        const double frac = std::clamp(m - m0, 0.0, 1.0);
        weight[m0] += (1.0 - frac) / dyn.trajectories;
        weight[m1] += frac / dyn.trajectories;
      } else {
        const int mr = std::clamp(static_cast<int>(std::lround(m)), 0, n);
        weight[mr] += 1.0 / dyn.trajectories;
      }
    }
    out.push_back(spectrum_from_ladder(kernel, LadderState::diagonal(std::move(weight))));
  }
  return out;
}

}  // namespace sreels
