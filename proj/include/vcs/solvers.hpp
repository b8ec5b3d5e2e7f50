#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vcs/denoisers.hpp"

namespace vcs {

struct SolveOptions {
  int max_iters = 300;
  double converge_tol = 1e-8;  // on relative change of ||X^t||_F
  bool record_trace = false;
  std::optional<Eigen::MatrixXd> initial_x;  // warm start; defaults to zero
};

struct TraceEntry {
  double residual_norm;  // ||R^t||_F (AMP) or primal residual (ADMM)
  double s_trace;        // trace(S^t)   (AMP) or dual residual   (ADMM)
};

struct SolveResult {
  Eigen::MatrixXd xhat;
  int iters = 0;
  bool converged = false;
  double residual_norm = 0.0;  // ||Y - A xhat||_F
  std::vector<TraceEntry> trace;
};

/// Thrown when an iterate stops being finite.
struct DivergedError : std::runtime_error {
  explicit DivergedError(int iter)
      : std::runtime_error("diverged at iteration " + std::to_string(iter)), iteration(iter) {}
  int iteration;
};

using DenoiserSchedule = std::function<DenoiserSpec(int iteration)>;

/// AMP-style iteration for Y = AX with a row-wise colored denoiser, the
/// Jacobian Onsager correction (1/delta) R^{t-1} Jbar(H^t; S^{t-1}) and the
/// column-centered residual covariance S^t. The t=0 step has no Onsager term.
SolveResult general_vcs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                        const DenoiserSchedule& schedule, const SolveOptions& opts = {});

/// general_vcs with a constant block-soft spec at the minimax threshold
/// tau(epsilon_for_tau, B).
SolveResult softsense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y, double epsilon_for_tau,
                      const SolveOptions& opts = {});

/// general_vcs with the James-Stein spec; tuning free, needs B >= 3.
SolveResult steinsense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                       const SolveOptions& opts = {});

/// Scalar-Onsager AMP on the stacked NB-vector. The denoiser is applied to
/// consecutive B-blocks through cov = sigma_t^2 I with sigma_t = ||R^t||/sqrt(n);
/// the correction uses the average diagonal of the analytic block Jacobians.
SolveResult array_amp(const Eigen::MatrixXd& A_arr, const Eigen::VectorXd& y_arr,
                      const DenoiserSpec& spec, int B, const SolveOptions& opts = {});

struct AdmmOptions {
  double rho = 1.0;
  int max_iters = 5000;
  double tol = 1e-9;  // primal/dual residual tolerance
  bool record_trace = false;
};

/// Minimize the sum of row norms subject to AX = Y, by ADMM with splitting
/// X = Z: the X-update projects onto the constraint through a cached
/// Cholesky of A A^T, the Z-update is row-wise block soft thresholding with
/// threshold 1/rho. Returns the feasible iterate.
SolveResult group_bp_admm(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                          const AdmmOptions& opts = {});

/// Support-aware least squares: solve on the support columns, zero elsewhere.
/// Requires n >= |support|.
Eigen::MatrixXd oracle_recover(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                               const std::vector<int>& support);

}  // namespace vcs
