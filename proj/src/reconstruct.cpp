#include "sreels/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "sreels/errors.hpp"

namespace sreels {

namespace {

// Euclidean projection onto the probability simplex (sort-based):
// theta from rho = max{i : u_i - (sum_{j<=i} u_j - 1)/(i+1) > 0}.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  for (int i = 0; i < n; ++i) {
    css += u[i];
    const double th = (css - 1.0) / (i + 1);
    if (u[i] - th > 0.0) theta = th;
  }
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = std::max(v(i) - theta, 0.0);
  return out;
}

// Lawson-Hanson nonnegative least squares, min ||A x - b||, x >= 0.
Eigen::VectorXd nnls_lawson_hanson(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd w = A.transpose() * b;
  const double tol = 1e-12 * w.cwiseAbs().maxCoeff() + 1e-300;

  for (int outer = 0; outer < 6 * n; ++outer) {
    // Most violated dual among the active (zero) variables.
    int j_best = -1;
    double w_best = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w(j) > w_best) {
        w_best = w(j);
        j_best = j;
      }
    if (j_best < 0) break;
    passive[j_best] = true;

    for (int inner = 0; inner < 6 * n; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      Eigen::MatrixXd Ap(A.rows(), idx.size());
      for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(c) = A.col(idx[c]);
      const Eigen::VectorXd z =
          Ap.completeOrthogonalDecomposition().solve(b);  // min-norm least squares

      bool all_positive = true;
      for (std::size_t c = 0; c < idx.size(); ++c)
        if (z(c) <= 0.0) all_positive = false;
      if (all_positive) {
        x.setZero();
        for (std::size_t c = 0; c < idx.size(); ++c) x(idx[c]) = z(c);
        break;
      }
      // Step toward z until the first passive variable hits zero.
      double alpha = 1.0;
      for (std::size_t c = 0; c < idx.size(); ++c)
        if (z(c) <= 0.0) {
          const double xi = x(idx[c]);
          if (xi - z(c) > 0.0) alpha = std::min(alpha, xi / (xi - z(c)));
        }
      for (std::size_t c = 0; c < idx.size(); ++c) {
        x(idx[c]) += alpha * (z(c) - x(idx[c]));
        if (x(idx[c]) <= 1e-14) {
          x(idx[c]) = 0.0;
          passive[idx[c]] = false;
        }
      }
    }
    w = A.transpose() * (b - A * x);
  }
  return x;
}

}  // namespace

KernelMatrix build_kernel_matrix(const ScatteringKernel& kernel) {
  if (std::abs(kernel.g) == 0.0)
    throw DomainError(
        "build_kernel_matrix: g = 0 makes every column a delta at l = 0 (singular)");
  KernelMatrix out;
  out.n_emitters = kernel.n_emitters;
  out.values.assign(static_cast<std::size_t>(out.rows()) * out.cols(), 0.0);
  for (int l = -kernel.n_emitters; l <= kernel.n_emitters; ++l)
    for (int m = 0; m <= kernel.n_emitters; ++m)
      out.values[static_cast<std::size_t>(l + kernel.n_emitters) * out.cols() + m] =
          kernel.loss_probability(l, m);
  return out;
}

namespace {

struct SolveOutcome {
  Eigen::VectorXd p;
  double residual = 0.0;
  int iterations = 0;
  double kkt = 0.0;
  std::vector<double> residual_history;
};

// Active-set warm start + monotone projected-gradient polish on the simplex.
SolveOutcome solve_simplex_ls(const Eigen::MatrixXd& D, const Eigen::VectorXd& P,
                              double lambda, bool enforce_convergence = false) {
  const int n = static_cast<int>(D.cols());

  // NNLS on the stacked system embeds the ridge term and softly pins the sum;
  // the exact simplex constraint is restored by projection afterwards.
  const double sum_weight = 1e4;
  const int extra = lambda > 0.0 ? n + 1 : 1;
  Eigen::MatrixXd A(D.rows() + extra, n);
  Eigen::VectorXd b(D.rows() + extra);
  A.topRows(D.rows()) = D;
  b.head(D.rows()) = P;
  if (lambda > 0.0) {
    A.middleRows(D.rows(), n) = std::sqrt(lambda) * Eigen::MatrixXd::Identity(n, n);
    b.segment(D.rows(), n).setZero();
  }
  A.row(D.rows() + extra - 1).setConstant(sum_weight);
  b(D.rows() + extra - 1) = sum_weight;

  Eigen::VectorXd p = nnls_lawson_hanson(A, b);
  const double psum = p.sum();
  p = psum > 0.0 ? project_simplex(p) : Eigen::VectorXd::Constant(n, 1.0 / n);

  const Eigen::MatrixXd H = D.transpose() * D + lambda * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd g0 = D.transpose() * P;
  const double lips = H.selfadjointView<Eigen::Lower>().operatorNorm();
  const double grad_scale = std::max(1.0, g0.cwiseAbs().maxCoeff());

  SolveOutcome out;
  out.residual_history.push_back((D * p - P).norm());

  double kkt = 0.0;
  int it = 0;
  const int cap = 20000;
  for (; it < cap; ++it) {
    const Eigen::VectorXd grad = H * p - g0;
    const Eigen::VectorXd p_next = project_simplex(p - grad / lips);
    kkt = (p - project_simplex(p - grad)).norm();
    if (kkt < 1e-10 * grad_scale) break;
    p = p_next;
    out.residual_history.push_back((D * p - P).norm());
  }
  out.p = p;
  out.residual = (D * p - P).norm();
  out.iterations = it;
  out.kkt = kkt;
  if (enforce_convergence && it >= cap && kkt >= 1e-10 * grad_scale)
    throw DomainError("recover_populations: no convergence after iteration cap, residual " +
                      std::to_string(out.residual));
  return out;
}

}  // namespace

ReconstructionReport recover_populations(const EELSSpectrum& spectrum,
                                         const ScatteringKernel& kernel,
                                         double lambda_reg,
                                         std::optional<double> noise_level) {
  if (spectrum.l_max != kernel.n_emitters)
    throw ValidationError("recover_populations: spectrum length must be 2N+1");
  if (lambda_reg < 0.0) throw ValidationError("recover_populations: lambda must be >= 0");
  const KernelMatrix km = build_kernel_matrix(kernel);

  const int rows = km.rows(), cols = km.cols();
  Eigen::MatrixXd D(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) D(r, c) = km.values[static_cast<std::size_t>(r) * cols + c];
  Eigen::VectorXd P(rows);
  for (int l = -kernel.n_emitters; l <= kernel.n_emitters; ++l)
    P(l + kernel.n_emitters) = spectrum.at_loss(l);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv(0);
  const double sigma_min = sv(sv.size() - 1);
  const double kappa = sigma_min > 0.0 ? sigma_max / sigma_min
                                       : std::numeric_limits<double>::infinity();

  double lambda = lambda_reg;
  if (noise_level && *noise_level > 0.0 && lambda_reg == 0.0) {
    // Discrepancy principle: grow lambda until the residual matches the
    // expected noise magnitude, then bisect.
    const double target = *noise_level * P.norm();
    double lo = 0.0, hi = 0.0;
    double res_lo = solve_simplex_ls(D, P, 0.0).residual;
    if (res_lo < target) {
      hi = 1e-10;
      while (hi < 1e3 && solve_simplex_ls(D, P, hi).residual < target) hi *= 4.0;
      for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (solve_simplex_ls(D, P, mid).residual < target)
          lo = mid;
        else
          hi = mid;
      }
      lambda = 0.5 * (lo + hi);
    }
  }

  const SolveOutcome sol = solve_simplex_ls(D, P, lambda, /*enforce_convergence=*/true);

  ReconstructionReport rep;
  rep.populations.assign(sol.p.data(), sol.p.data() + cols);
  rep.residual_norm = sol.residual;
  rep.condition_number = kappa;
  rep.lambda_used = lambda;
  rep.iterations = sol.iterations;
  rep.kkt_residual = sol.kkt;
  rep.residual_history = sol.residual_history;
  rep.rank_deficient =
      sigma_min < rows * std::numeric_limits<double>::epsilon() * sigma_max;
  rep.unreliable = kappa > 1e8;

  // Did the unconstrained least-squares solution need clipping?
  const Eigen::VectorXd p_free = svd.solve(P);
  rep.clipped_negatives = p_free.minCoeff() < -1e-12;
  return rep;
}

}  // namespace sreels
