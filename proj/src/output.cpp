#include "sreels/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sreels/errors.hpp"

namespace sreels {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string spectrum_to_csv(const EELSSpectrum& sp) {
  std::ostringstream os;
  os << "loss_index,energy_eV,probability\n";
  for (int l = -sp.l_max; l <= sp.l_max; ++l)
    os << l << ',' << format_double(l * sp.hbar_omega0_ev) << ','
       << format_double(sp.at_loss(l)) << '\n';
  return os.str();
}

EELSSpectrum spectrum_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty spectrum CSV");
  std::vector<std::pair<int, double>> rows;
  double hbar_omega0 = 1.0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    const int l = std::stoi(cell);
    std::getline(ls, cell, ',');
    const double energy = std::stod(cell);
    std::getline(ls, cell, ',');
    rows.emplace_back(l, std::stod(cell));
    if (l != 0) hbar_omega0 = energy / l;
  }
  if (rows.empty()) throw ValidationError("spectrum CSV has no rows");
  int l_max = 0;
  for (const auto& [l, p] : rows) l_max = std::max(l_max, std::abs(l));
  EELSSpectrum sp = EELSSpectrum::zeros(l_max);
  sp.hbar_omega0_ev = hbar_omega0;
  for (const auto& [l, p] : rows) sp.at_loss(l) = p;
  return sp;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "theta_deg,tau_fs,area_rad,g_eff,dipole_sq_norm\n";
  for (std::size_t it = 0; it < sweep.theta_rad.size(); ++it) {
    const double deg = sweep.theta_rad[it] * 180.0 / constants::pi;
    for (std::size_t jt = 0; jt < sweep.tau_fs.size(); ++jt)
      os << format_double(deg) << ',' << format_double(sweep.tau_fs[jt]) << ','
         << format_double(sweep.rabi_rate_rad_fs * sweep.tau_fs[jt]) << ','
         << format_double(sweep.g_eff[it][jt]) << ','
         << format_double(sweep.dipole_sq_norm[it]) << '\n';
  }
  return os.str();
}

std::string timeseries_to_csv(const std::vector<double>& t, const std::vector<double>& mean_m,
                              const std::vector<double>& intensity) {
  std::ostringstream os;
  os << "t,mean_m,intensity\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << format_double(t[i]) << ',' << format_double(mean_m[i]) << ','
       << format_double(intensity[i]) << '\n';
  return os.str();
}

std::string delay_spectra_to_csv(const std::vector<double>& delays,
                                 const std::vector<EELSSpectrum>& spectra) {
  std::ostringstream os;
  os << "delay_fs,loss_index,energy_eV,probability\n";
  for (std::size_t d = 0; d < delays.size(); ++d) {
    const auto& sp = spectra[d];
    for (int l = -sp.l_max; l <= sp.l_max; ++l)
      os << format_double(delays[d]) << ',' << l << ','
         << format_double(l * sp.hbar_omega0_ev) << ',' << format_double(sp.at_loss(l))
         << '\n';
  }
  return os.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open for writing: " + path);
  f << content;
  if (!f) throw ValidationError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace sreels
