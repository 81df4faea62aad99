#include "sreels/scattering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sreels/errors.hpp"
#include "sreels/special_functions.hpp"

namespace sreels {

namespace {

constexpr int kFullSpaceMaxN = 16;
constexpr double kGmagMax = 0.5 * constants::pi;

void check_kernel_domain(int n_emitters, double gmag) {
  if (n_emitters < 1) throw ValidationError("scattering kernel: N must be >= 1");
  if (!(gmag >= 0.0) || gmag > kGmagMax + 1e-12)
    throw DomainError("scattering kernel: |g| must lie in [0, pi/2]");
}

}  // namespace

double ScatteringKernel::loss_probability(int loss, int initial_m) const {
  const int n = initial_m + loss;
  if (n < 0 || n > n_emitters) return 0.0;
  return std::norm(element(n, initial_m));
}

double ScatteringKernel::column_norm_defect() const {
  double worst = 0.0;
  for (int m = 0; m <= n_emitters; ++m) {
    double sum = 0.0;
    for (int n = 0; n <= n_emitters; ++n) sum += std::norm(element(n, m));
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

std::string ScatteringKernel::to_json() const {
  nlohmann::json j;
  j["N"] = n_emitters;
  j["g_re"] = g.real();
  j["g_im"] = g.imag();
  std::vector<double> re(s.size()), im(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    re[i] = s[i].real();
    im[i] = s[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

ScatteringKernel ScatteringKernel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ValidationError(std::string("bad kernel JSON: ") + err.what());
  }
  ScatteringKernel k;
  k.n_emitters = j.at("N").get<int>();
  k.g = {j.at("g_re").get<double>(), j.at("g_im").get<double>()};
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  const std::size_t want = static_cast<std::size_t>(k.n_emitters + 1) * (k.n_emitters + 1);
  if (re.size() != want || im.size() != want)
    throw ValidationError("kernel JSON has wrong matrix size");
  k.s.resize(want);
  for (std::size_t i = 0; i < want; ++i) k.s[i] = {re[i], im[i]};
  return k;
}

ScatteringKernel exact_elements(int n_emitters, std::complex<double> g) {
  const double gmag = std::abs(g);
  check_kernel_domain(n_emitters, gmag);

  const int dim = n_emitters + 1;
  ScatteringKernel kernel;
  kernel.n_emitters = n_emitters;
  kernel.g = g;
  kernel.s.assign(static_cast<std::size_t>(dim) * dim, 0.0);

  if (gmag == 0.0) {
    for (int m = 0; m < dim; ++m) kernel.s[static_cast<std::size_t>(m) * dim + m] = 1.0;
    return kernel;
  }

  // Ladder generator S+ + S- : symmetric tridiagonal with
  // <m+1|S+|m> = sqrt((m+1)(N-m)).
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < n_emitters; ++m) {
    const double v = std::sqrt(static_cast<double>(m + 1) * (n_emitters - m));
    gen(m + 1, m) = v;
    gen(m, m + 1) = v;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gen);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd& vec = eig.eigenvectors();

  Eigen::VectorXcd phase(dim);
  for (int k = 0; k < dim; ++k)
    phase(k) = std::complex<double>(std::cos(gmag * lam(k)), std::sin(gmag * lam(k)));
  const Eigen::MatrixXcd s0 =
      vec.cast<std::complex<double>>() * phase.asDiagonal() *
      vec.transpose().cast<std::complex<double>>();

  const double arg = std::arg(g);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      const double chi = (n - m) * arg;
      kernel.s[static_cast<std::size_t>(n) * dim + m] =
          s0(n, m) * std::complex<double>(std::cos(chi), std::sin(chi));
    }
  return kernel;
}

std::complex<double> series_element(int n_emitters, std::complex<double> g, int n, int m) {
  const double gmag = std::abs(g);
  check_kernel_domain(n_emitters, gmag);
  if (n < 0 || n > n_emitters || m < 0 || m > n_emitters)
    throw ValidationError("series_element: indices out of range");
  if (gmag == 0.0) return n == m ? 1.0 : 0.0;

  const double si = std::sin(gmag), co = std::cos(gmag);
  const int klo = std::max(0, m - n);
  const int khi = std::min(m, n_emitters - n);
  if (klo > khi) return 0.0;

  const double half =
      0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0) +
             std::lgamma(n_emitters - n + 1.0) + std::lgamma(n_emitters - m + 1.0));

  // Each k-term rewritten as cos^{N-(n-m)-2k} sin^{(n-m)+2k}; both exponents
  // are nonnegative on the valid k window, so every term is finite.
  double sum = 0.0, comp = 0.0;
  for (int k = klo; k <= khi; ++k) {
    const int pc = n_emitters - (n - m) - 2 * k;
    const int ps = (n - m) + 2 * k;
    double lt = half - (std::lgamma(k + 1.0) + std::lgamma(m - k + 1.0) +
                        std::lgamma(n - m + k + 1.0) + std::lgamma(n_emitters - n - k + 1.0));
    if (pc > 0) {
      if (co == 0.0) continue;
      lt += pc * std::log(co);
    }
    if (ps > 0) {
      if (si == 0.0) continue;
      lt += ps * std::log(si);
    }
    const double term = (k % 2 == 0 ? 1.0 : -1.0) * std::exp(lt);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  // i^{n-m} e^{i(n-m) arg g}
  const double chi = (n - m) * (0.5 * constants::pi + std::arg(g));
  return sum * std::complex<double>(std::cos(chi), std::sin(chi));
}

EELSSpectrum bessel_approx_spectrum(int n_emitters, int m, double g_mag) {
  if (m <= 0 || m >= n_emitters)
    throw DomainError("bessel_approx_spectrum: requires 0 < m < N (ladder edges excluded)");
  if (!(g_mag >= 0.0)) throw DomainError("bessel_approx_spectrum: g_mag must be >= 0");

  EELSSpectrum sp = EELSSpectrum::zeros(n_emitters);
  const double g_eff = g_mag * std::sqrt(static_cast<double>(n_emitters) * m -
                                         static_cast<double>(m) * m);
  if (g_eff == 0.0) {
    sp.at_loss(0) = 1.0;
    return sp;
  }
  const auto j = bessel_j_sequence(n_emitters, 2.0 * g_eff);
  // Walk outward until the remaining tail is below 1e-12.
  double mass = j[0] * j[0];
  int lcut = 0;
  for (int l = 1; l <= n_emitters; ++l) {
    mass += 2.0 * j[l] * j[l];
    lcut = l;
    if (1.0 - mass < 1e-12) break;
  }
  sp.at_loss(0) = j[0] * j[0];
  for (int l = 1; l <= lcut; ++l) {
    sp.at_loss(l) = j[l] * j[l];
    sp.at_loss(-l) = j[l] * j[l];
  }
  for (double& p : sp.probability) p /= mass;
  return sp;
}

namespace {

// G v with G = i sum_j (a_j sigma+_j + a_j^* sigma-_j) on one charge block.
void apply_generator(const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& in,
                     std::vector<std::complex<double>>& out) {
  const std::size_t dim = in.size();
  std::fill(out.begin(), out.end(), std::complex<double>(0.0, 0.0));
  const int n = static_cast<int>(a.size());
  for (int j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    const std::complex<double> up = std::complex<double>(0.0, 1.0) * a[j];
    const std::complex<double> dn = std::complex<double>(0.0, 1.0) * std::conj(a[j]);
    for (std::size_t cfg = 0; cfg < dim; ++cfg) {
      if (cfg & bit) continue;
      out[cfg | bit] += up * in[cfg];
      out[cfg] += dn * in[cfg | bit];
    }
  }
}

// v <- exp(G) v by scaling and repeated truncated Taylor application.
void expm_apply(const std::vector<std::complex<double>>& a,
                std::vector<std::complex<double>>& v) {
  double bound = 0.0;
  for (const auto& aj : a) bound += std::abs(aj);
  int scale_pow = 0;
  while (bound / static_cast<double>(1 << scale_pow) > 0.5 && scale_pow < 40) ++scale_pow;
  const double inv_steps = 1.0 / static_cast<double>(1 << scale_pow);

  std::vector<std::complex<double>> term(v.size()), tmp(v.size());
  for (int step = 0; step < (1 << scale_pow); ++step) {
    term = v;
    double acc_norm = 0.0;
    for (const auto& x : v) acc_norm += std::norm(x);
    for (int k = 1; k <= 64; ++k) {
      apply_generator(a, term, tmp);
      const double f = inv_steps / k;
      double term_norm = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        term[i] = tmp[i] * f;
        v[i] += term[i];
        term_norm += std::norm(term[i]);
      }
      if (term_norm <= 1e-32 * acc_norm) break;
    }
  }
}

std::vector<std::complex<double>> electron_frame_coefficients(
    const CouplingSet& coupl, const EmitterEnsemble& ens, const ElectronParams& e) {
  if (static_cast<int>(coupl.g.size()) != ens.count)
    throw ValidationError("full_evolution: coupling set size must equal N");
  if (ens.count > kFullSpaceMaxN)
    throw CapacityError("full_evolution: N > 16 exceeds the 2^N space; use the ladder path");
  const auto chi = ens.electron_phases(e);
  std::vector<std::complex<double>> a(coupl.g.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double two_chi = 2.0 * chi[j];
    a[j] = coupl.g[j] * std::complex<double>(std::cos(two_chi), std::sin(two_chi));
  }
  return a;
}

JointState evolve_blocks(const std::vector<std::complex<double>>& a, int n_emitters,
                         int charge_min,
                         std::vector<std::vector<std::complex<double>>> blocks) {
  for (auto& block : blocks) {
    double norm = 0.0;
    for (const auto& x : block) norm += std::norm(x);
    if (norm > 1e-28) expm_apply(a, block);
  }
  JointState out;
  out.n_emitters = n_emitters;
  out.charge_min = charge_min;
  out.blocks = std::move(blocks);
  return out;
}

}  // namespace

double JointState::total_norm() const {
  double norm = 0.0;
  for (const auto& block : blocks)
    for (const auto& x : block) norm += std::norm(x);
  return norm;
}

double JointState::mean_excitation() const {
  double mean = 0.0;
  for (const auto& block : blocks)
    for (std::size_t cfg = 0; cfg < block.size(); ++cfg)
      mean += std::popcount(cfg) * std::norm(block[cfg]);
  return mean;
}

EELSSpectrum JointState::electron_marginal(double hbar_omega0_ev) const {
  const int c_max = charge_min + charge_count() - 1;
  const int l_span = std::max({n_emitters, std::abs(-c_max), std::abs(n_emitters - charge_min)});
  EELSSpectrum sp = EELSSpectrum::zeros(l_span);
  sp.hbar_omega0_ev = hbar_omega0_ev;
  for (int b = 0; b < charge_count(); ++b) {
    const int c = charge_min + b;
    const auto& block = blocks[b];
    for (std::size_t cfg = 0; cfg < block.size(); ++cfg) {
      const double w = std::norm(block[cfg]);
      if (w > 0.0) sp.at_loss(std::popcount(cfg) - c) += w;
    }
  }
  return sp;
}

JointState full_evolution(const CouplingSet& coupl, const ProductState& initial,
                          const EmitterEnsemble& ens, const ElectronParams& e) {
  initial.validate();
  if (initial.size() != ens.count)
    throw ValidationError("full_evolution: product state size must equal N");
  const auto a = electron_frame_coefficients(coupl, ens, e);
  const int n = ens.count;
  const std::size_t dim = std::size_t{1} << n;

  std::vector<std::complex<double>> psi(dim, 1.0);
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(0.5 * initial.polar[j]);
    const double s = std::sin(0.5 * initial.polar[j]);
    const std::complex<double> up =
        s * std::complex<double>(std::cos(initial.azimuth[j]), std::sin(initial.azimuth[j]));
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t cfg = 0; cfg < dim; ++cfg) psi[cfg] *= (cfg & bit) ? up : c;
  }

  std::vector<std::vector<std::complex<double>>> blocks(
      n + 1, std::vector<std::complex<double>>(dim, 0.0));
  for (std::size_t cfg = 0; cfg < dim; ++cfg)
    blocks[std::popcount(cfg)][cfg] = psi[cfg];
  return evolve_blocks(a, n, 0, std::move(blocks));
}

JointState full_evolution(const CouplingSet& coupl, const LadderState& initial,
                          const EmitterEnsemble& ens, const ElectronParams& e) {
  if (!initial.is_pure())
    throw ValidationError(
        "full_evolution: diagonal states must be decomposed into pure ladder states");
  if (initial.size() != ens.count)
    throw ValidationError("full_evolution: ladder state size must equal N");
  const auto a = electron_frame_coefficients(coupl, ens, e);
  const int n = ens.count;
  const std::size_t dim = std::size_t{1} << n;
  const auto chi = ens.electron_phases(e);
  const auto& c_m = initial.amplitudes();

  std::vector<std::vector<std::complex<double>>> blocks(
      n + 1, std::vector<std::complex<double>>(dim, 0.0));
  for (std::size_t cfg = 0; cfg < dim; ++cfg) {
    const int m = std::popcount(cfg);
    if (std::norm(c_m[m]) == 0.0) continue;
    double phase = 0.0;
    for (int j = 0; j < n; ++j)
      if (cfg & (std::size_t{1} << j)) phase += chi[j];
    const double half_log_binom =
        0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0));
    blocks[m][cfg] = c_m[m] * std::exp(-half_log_binom) *
                     std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return evolve_blocks(a, n, 0, std::move(blocks));
}

JointState full_evolution_shaped(const CouplingSet& coupl, const LadderState& initial,
                                 const ElectronComb& comb, const EmitterEnsemble& ens,
                                 const ElectronParams& e) {
  if (!initial.is_pure())
    throw ValidationError("full_evolution_shaped: initial ladder state must be pure");
  if (initial.size() != ens.count)
    throw ValidationError("full_evolution_shaped: ladder state size must equal N");
  comb.validate();
  const auto a = electron_frame_coefficients(coupl, ens, e);
  const int n = ens.count;
  const std::size_t dim = std::size_t{1} << n;
  const auto chi = ens.electron_phases(e);
  const auto& c_m = initial.amplitudes();

  const int c_min = -comb.k_max();
  const int c_max = n - comb.k_min;
  std::vector<std::vector<std::complex<double>>> blocks(
      c_max - c_min + 1, std::vector<std::complex<double>>(dim, 0.0));
  for (std::size_t cfg = 0; cfg < dim; ++cfg) {
    const int m = std::popcount(cfg);
    if (std::norm(c_m[m]) == 0.0) continue;
    double phase = 0.0;
    for (int j = 0; j < n; ++j)
      if (cfg & (std::size_t{1} << j)) phase += chi[j];
    const double half_log_binom =
        0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0));
    const std::complex<double> amp = c_m[m] * std::exp(-half_log_binom) *
                                     std::complex<double>(std::cos(phase), std::sin(phase));
    for (int k = comb.k_min; k <= comb.k_max(); ++k) {
      const auto gk = comb.amplitudes[k - comb.k_min];
      if (std::norm(gk) == 0.0) continue;
      blocks[m - k - c_min][cfg] += amp * gk;
    }
  }
  return evolve_blocks(a, n, c_min, std::move(blocks));
}

}  // namespace sreels
