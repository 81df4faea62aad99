#include "sreels/ladder.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "sreels/constants.hpp"
#include "sreels/errors.hpp"

namespace sreels {

namespace {

constexpr int kMaxLadderN = 1000;
constexpr double kNormTol = 1e-12;
constexpr double kPhaseTol = 1e-9;

double half_log_binomial(int n, int m) {
  return 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0));
}

}  // namespace

LadderState LadderState::pure(std::vector<std::complex<double>> amplitudes) {
  if (amplitudes.empty()) throw ValidationError("ladder state needs at least one amplitude");
  if (static_cast<int>(amplitudes.size()) > kMaxLadderN + 1)
    throw ValidationError("ladder state capped at N = 1000");
  double norm = 0.0;
  for (const auto& c : amplitudes) norm += std::norm(c);
  if (std::abs(norm - 1.0) > kNormTol)
    throw ValidationError("pure ladder state is not normalized");
  LadderState st;
  st.n_ = static_cast<int>(amplitudes.size()) - 1;
  st.kind_ = Kind::pure;
  st.amplitudes_ = std::move(amplitudes);
  return st;
}

LadderState LadderState::diagonal(std::vector<double> populations) {
  if (populations.empty()) throw ValidationError("ladder state needs at least one population");
  if (static_cast<int>(populations.size()) > kMaxLadderN + 1)
    throw ValidationError("ladder state capped at N = 1000");
  double sum = 0.0;
  for (double p : populations) {
    if (p < -kNormTol) throw ValidationError("populations must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTol)
    throw ValidationError("diagonal ladder state is not normalized");
  LadderState st;
  st.n_ = static_cast<int>(populations.size()) - 1;
  st.kind_ = Kind::diagonal;
  for (double& p : populations) p = std::max(p, 0.0);
  st.populations_ = std::move(populations);
  return st;
}

const std::vector<std::complex<double>>& LadderState::amplitudes() const {
  if (kind_ != Kind::pure) throw ValidationError("state is not pure");
  return amplitudes_;
}

const std::vector<double>& LadderState::populations() const {
  if (kind_ != Kind::diagonal) throw ValidationError("state is not diagonal");
  return populations_;
}

std::vector<double> LadderState::weights() const {
  if (kind_ == Kind::diagonal) return populations_;
  std::vector<double> w(amplitudes_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::norm(amplitudes_[i]);
  return w;
}

std::string LadderState::to_json() const {
  nlohmann::json j;
  j["N"] = n_;
  if (kind_ == Kind::pure) {
    j["kind"] = "pure";
    std::vector<double> re(amplitudes_.size()), im(amplitudes_.size());
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
      re[i] = amplitudes_[i].real();
      im[i] = amplitudes_[i].imag();
    }
    j["re"] = re;
    j["im"] = im;
  } else {
    j["kind"] = "diagonal";
    j["p"] = populations_;
  }
  return j.dump();
}

LadderState LadderState::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ValidationError(std::string("bad state JSON: ") + err.what());
  }
  if (!j.contains("N") || !j.contains("kind"))
    throw ValidationError("state JSON requires fields N and kind");
  const int n = j.at("N").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pure") {
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (static_cast<int>(re.size()) != n + 1 || static_cast<int>(im.size()) != n + 1)
      throw ValidationError("state JSON arrays must have length N+1");
    std::vector<std::complex<double>> amps(n + 1);
    for (int i = 0; i <= n; ++i) amps[i] = {re[i], im[i]};
    return pure(std::move(amps));
  }
  if (kind == "diagonal") {
    auto p = j.at("p").get<std::vector<double>>();
    if (static_cast<int>(p.size()) != n + 1)
      throw ValidationError("state JSON arrays must have length N+1");
    return diagonal(std::move(p));
  }
  throw ValidationError("state JSON kind must be \"pure\" or \"diagonal\"");
}

void ProductState::validate() const {
  if (polar.empty()) throw ValidationError("product state needs at least one emitter");
  if (polar.size() != azimuth.size())
    throw ValidationError("product state polar/azimuth lengths differ");
  for (double t : polar)
    if (!(t >= 0.0) || !(t <= constants::pi + 1e-12))
      throw ValidationError("polar angles must lie in [0, pi]");
}

LadderState ladder_from_pulse(int n_emitters, double pulse_area) {
  if (n_emitters < 1) throw ValidationError("ladder_from_pulse: N must be >= 1");
  if (n_emitters > kMaxLadderN) throw ValidationError("ladder_from_pulse: N capped at 1000");
  const double c = std::cos(0.5 * pulse_area);
  const double s = std::sin(0.5 * pulse_area);
  std::vector<std::complex<double>> amps(n_emitters + 1, 0.0);
  const double ac = std::abs(c), as = std::abs(s);
  for (int m = 0; m <= n_emitters; ++m) {
    const int mc = n_emitters - m;
    if ((ac == 0.0 && mc > 0) || (as == 0.0 && m > 0)) continue;
    double lv = half_log_binomial(n_emitters, m);
    if (mc > 0) lv += mc * std::log(ac);
    if (m > 0) lv += m * std::log(as);
    double sign = 1.0;
    if (c < 0.0 && mc % 2 == 1) sign = -sign;
    if (s < 0.0 && m % 2 == 1) sign = -sign;
    amps[m] = sign * std::exp(lv);
  }
  double norm = 0.0;
  for (const auto& a : amps) norm += std::norm(a);
  norm = std::sqrt(norm);
  for (auto& a : amps) a /= norm;
  return LadderState::pure(std::move(amps));
}

std::optional<LadderState> product_to_ladder(const ProductState& s,
                                             std::span<const double> electron_phases) {
  s.validate();
  const int n = s.size();
  if (static_cast<int>(electron_phases.size()) != n)
    throw ValidationError("product_to_ladder: phase list length must equal N");

  const double theta0 = s.polar[0];
  for (double t : s.polar)
    if (std::abs(t - theta0) > kPhaseTol) return std::nullopt;

  // Poles carry no azimuth information; phases only constrain tilted spins.
  const bool tilted = std::abs(std::sin(0.5 * theta0)) > 1e-12 &&
                      std::abs(std::cos(0.5 * theta0)) > 1e-12;
  double delta = 0.0;
  if (tilted && n > 1) {
    delta = std::remainder(s.azimuth[0] - electron_phases[0], 2.0 * constants::pi);
    for (int i = 1; i < n; ++i) {
      const double ri = std::remainder(s.azimuth[i] - electron_phases[i], 2.0 * constants::pi);
      if (std::abs(std::remainder(ri - delta, 2.0 * constants::pi)) > kPhaseTol)
        return std::nullopt;
    }
  } else if (tilted) {
    delta = std::remainder(s.azimuth[0] - electron_phases[0], 2.0 * constants::pi);
  }

  LadderState base = ladder_from_pulse(n, theta0);
  std::vector<std::complex<double>> amps = base.amplitudes();
  for (int m = 0; m <= n; ++m)
    amps[m] *= std::complex<double>(std::cos(m * delta), std::sin(m * delta));
  return LadderState::pure(std::move(amps));
}

double mean_excitation(const LadderState& st) {
  const auto w = st.weights();
  double mean = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) mean += static_cast<double>(m) * w[m];
  return mean;
}

double excitation_variance(const LadderState& st) {
  const auto w = st.weights();
  double mean = 0.0, second = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) {
    mean += static_cast<double>(m) * w[m];
    second += static_cast<double>(m) * m * w[m];
  }
  return second - mean * mean;
}

}  // namespace sreels
