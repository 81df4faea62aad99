#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sreels {

// State of N emitters restricted to the symmetric (Dicke) ladder |m>,
// m = 0..N, either as pure amplitudes c_m or as diagonal populations p_m.
//
// The ladder basis is tied to the electron frame: |m> carries the phase
// factor exp(+i sum_{i in A} omega0 z_i / v) on each excited subset A, so a
// tilted-pulse product state with azimuths phi_i = omega0 z_i/v + delta maps
// onto it (see product_to_ladder).
class LadderState {
 public:
  enum class Kind { pure, diagonal };

  static LadderState pure(std::vector<std::complex<double>> amplitudes);
  static LadderState diagonal(std::vector<double> populations);

  int size() const { return n_; }                 // N
  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::pure; }
  const std::vector<std::complex<double>>& amplitudes() const;
  const std::vector<double>& populations() const;
  // |c_m|^2 for pure states, p_m for diagonal ones.
  std::vector<double> weights() const;

  std::string to_json() const;
  static LadderState from_json(const std::string& text);

 private:
  LadderState() = default;
  int n_ = 0;
  Kind kind_ = Kind::pure;
  std::vector<std::complex<double>> amplitudes_;
  std::vector<double> populations_;
};

// Pure product state of N emitters: Bloch polar angle and azimuth per emitter,
//   (x)_i  cos(theta_i/2)|g> + e^{i phi_i} sin(theta_i/2)|e>.
struct ProductState {
  std::vector<double> polar;    // in [0, pi]
  std::vector<double> azimuth;  // in [0, 2pi)
  int size() const { return static_cast<int>(polar.size()); }
  void validate() const;
};

// Spin-coherent state after a resonant pulse of the given area:
// c_m = sqrt(C(N,m)) cos(phi/2)^{N-m} sin(phi/2)^m.
LadderState ladder_from_pulse(int n_emitters, double pulse_area);

// Converts a product state to ladder amplitudes when it lies on the ladder:
// all polar angles equal and all residuals phi_i - omega0 z_i/v equal modulo
// 2pi within 1e-9 rad.  Returns nullopt (MISMATCH) otherwise; such states
// need the full 2^N evolution.
std::optional<LadderState> product_to_ladder(const ProductState& s,
                                             std::span<const double> electron_phases);

double mean_excitation(const LadderState& st);
double excitation_variance(const LadderState& st);

}  // namespace sreels
