#pragma once

#include <optional>
#include <vector>

#include "sreels/scattering.hpp"
#include "sreels/spectrum.hpp"

namespace sreels {

// Loss kernel as a dense real matrix: rows are loss indices l in [-N, N],
// columns are initial ladder indices m.  Columns sum to 1.
struct KernelMatrix {
  int n_emitters = 0;
  std::vector<double> values;  // (2N+1) x (N+1), row-major

  int rows() const { return 2 * n_emitters + 1; }
  int cols() const { return n_emitters + 1; }
  double at(int loss, int m) const {
    return values[static_cast<std::size_t>(loss + n_emitters) * cols() + m];
  }
};

// Throws DomainError when g = 0 (all columns collapse to a delta at l = 0).
KernelMatrix build_kernel_matrix(const ScatteringKernel& kernel);

struct ReconstructionReport {
  std::vector<double> populations;       // nonnegative, sums to 1
  double residual_norm = 0.0;            // ||D p - P||_2
  double condition_number = 0.0;         // sigma_max/sigma_min of D
  double lambda_used = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool clipped_negatives = false;        // unconstrained solution had negatives
  bool rank_deficient = false;
  bool unreliable = false;               // condition number above 1e8
  std::vector<double> residual_history;  // non-increasing across iterations
};

// Solves min_p ||D p - P||^2 + lambda ||p||^2 over the probability simplex
// (active-set nonnegative least squares warm start, projected-gradient
// polish to KKT residual < 1e-10).  When a noise level is supplied and
// lambda_reg = 0, lambda is chosen by the discrepancy principle.
ReconstructionReport recover_populations(const EELSSpectrum& spectrum,
                                         const ScatteringKernel& kernel,
                                         double lambda_reg = 0.0,
                                         std::optional<double> noise_level = std::nullopt);

}  // namespace sreels
