#include "sreels/eels.hpp"

#include <cmath>

#include "sreels/errors.hpp"

namespace sreels {

EELSSpectrum EELSSpectrum::zeros(int l_max) {
  EELSSpectrum sp;
  sp.l_max = l_max;
  sp.probability.assign(2 * l_max + 1, 0.0);
  return sp;
}

double EELSSpectrum::total() const {
  double t = 0.0;
  for (double p : probability) t += p;
  return t;
}

double EELSSpectrum::mean_loss() const {
  double mean = 0.0;
  for (int l = -l_max; l <= l_max; ++l) mean += l * at_loss(l);
  return mean;
}

double EELSSpectrum::variance() const {
  const double mu = mean_loss();
  double var = 0.0;
  for (int l = -l_max; l <= l_max; ++l) {
    const double d = l - mu;
    var += d * d * at_loss(l);
  }
  return var;
}

void EELSSpectrum::validate() const {
  if (static_cast<int>(probability.size()) != 2 * l_max + 1)
    throw ValidationError("spectrum storage size mismatch");
  for (double p : probability)
    if (p < -1e-10) throw ValidationError("spectrum has a negative probability");
  if (std::abs(total() - 1.0) > 1e-10)
    throw ValidationError("spectrum is not normalized");
}

void ElectronComb::validate() const {
  if (amplitudes.empty()) throw ValidationError("electron comb needs at least one tooth");
  double norm = 0.0;
  for (const auto& g : amplitudes) norm += std::norm(g);
  if (std::abs(norm - 1.0) > 1e-12)
    throw ValidationError("electron comb is not normalized");
}

ElectronComb ElectronComb::delta() {
  ElectronComb comb;
  comb.k_min = 0;
  comb.amplitudes = {1.0};
  return comb;
}

EELSSpectrum spectrum_from_ladder(const ScatteringKernel& kernel, const LadderState& st) {
  if (kernel.n_emitters != st.size())
    throw ValidationError("spectrum_from_ladder: kernel and state dimensions differ");
  const auto w = st.weights();
  EELSSpectrum sp = EELSSpectrum::zeros(kernel.n_emitters);
  for (int l = -kernel.n_emitters; l <= kernel.n_emitters; ++l) {
    double p = 0.0;
    for (int m = 0; m <= kernel.n_emitters; ++m)
      if (w[m] > 0.0) p += w[m] * kernel.loss_probability(l, m);
    sp.at_loss(l) = p;
  }
  return sp;
}

EELSSpectrum spectrum_from_joint(const JointState& joint, double hbar_omega0_ev) {
  return joint.electron_marginal(hbar_omega0_ev);
}

EELSSpectrum spectrum_shaped(const ScatteringKernel& kernel, const LadderState& st,
                             const ElectronComb& comb) {
  if (!st.is_pure()) throw ValidationError("spectrum_shaped: state must be pure");
  if (kernel.n_emitters != st.size())
    throw ValidationError("spectrum_shaped: kernel and state dimensions differ");
  comb.validate();
  const int n_em = kernel.n_emitters;
  const auto& c_m = st.amplitudes();

  const int l_lo = comb.k_min - n_em;
  const int l_hi = comb.k_max() + n_em;
  const int span = std::max(std::abs(l_lo), std::abs(l_hi));
  EELSSpectrum sp = EELSSpectrum::zeros(std::max(span, n_em));

  for (int l = l_lo; l <= l_hi; ++l) {
    double p = 0.0;
    for (int n = 0; n <= n_em; ++n) {
      std::complex<double> amp = 0.0;
      for (int m = 0; m <= n_em; ++m) {
        const int k = l - (n - m);
        if (k < comb.k_min || k > comb.k_max()) continue;
        amp += comb.amplitudes[k - comb.k_min] * c_m[m] * kernel.element(n, m);
      }
      p += std::norm(amp);
    }
    sp.at_loss(l) = p;
  }
  return sp;
}

double effective_coupling(const EELSSpectrum& sp) {
  return std::sqrt(sp.variance() / 2.0);
}

}  // namespace sreels
