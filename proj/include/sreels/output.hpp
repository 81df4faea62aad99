#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sreels/dynamics.hpp"
#include "sreels/excitation.hpp"
#include "sreels/spectrum.hpp"

namespace sreels {

// Doubles are printed with %.17g so re-ingestion round-trips exactly and
// repeated runs are byte-identical.
std::string format_double(double v);

std::string spectrum_to_csv(const EELSSpectrum& sp);
EELSSpectrum spectrum_from_csv(const std::string& text);

std::string sweep_to_csv(const SweepResult& sweep);
std::string timeseries_to_csv(const std::vector<double>& t, const std::vector<double>& mean_m,
                              const std::vector<double>& intensity);
std::string delay_spectra_to_csv(const std::vector<double>& delays,
                                 const std::vector<EELSSpectrum>& spectra);

// FNV-1a 64-bit, for the run manifest checksums.
std::uint64_t fnv1a64(const std::string& data);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace sreels
