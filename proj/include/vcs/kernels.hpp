#pragma once

#include <Eigen/Dense>

#include "vcs/denoisers.hpp"

// Hot row-wise loops, OpenMP-parallel with fixed-size chunking so reductions
// combine in a thread-count-independent order (bitwise reproducible runs).
// Each kernel keeps a plain serial reference used by the tests and the
// benchmark target.

namespace vcs::kernels {

inline constexpr int kRowChunk = 256;

// Shared scalar form of both denoisers: eta(u) = c I + d u u^T at u, zero in
// the dead zone. Returns false (c=d=0) in the dead zone.
inline bool plain_jacobian_coeffs(const DenoiserSpec& spec, const Eigen::VectorXd& u,
                                  double& c, double& d) {
  if (spec.kind == DenoiserSpec::Kind::block_soft) {
    const double nrm = u.norm();
    if (nrm <= spec.tau) return false;
    c = 1.0 - spec.tau / nrm;
    d = spec.tau / (nrm * nrm * nrm);
    return true;
  }
  const int B = static_cast<int>(u.size());
  if (B < 3) throw std::invalid_argument("James-Stein requires B >= 3");
  const double n2 = u.squaredNorm();
  if (n2 <= static_cast<double>(B - 2)) return false;
  c = 1.0 - (B - 2) / n2;
  d = 2.0 * (B - 2) / (n2 * n2);
  return true;
}

/// Row-wise colored denoiser applied to an N x B matrix.
Eigen::MatrixXd denoise_rows(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                             const CovarianceState& cov);
Eigen::MatrixXd denoise_rows_serial(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                                    const CovarianceState& cov);

/// (1/N) sum_i Jac(eta_colored)(H_i)^T.
Eigen::MatrixXd avg_jacobian_t(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                               const CovarianceState& cov);
Eigen::MatrixXd avg_jacobian_t_serial(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                                      const CovarianceState& cov);

/// One-pass production path: the denoised matrix and the averaged transposed
/// Jacobian at the same (H, cov), sharing the whitened rows.
struct DenoiseJacobian {
  Eigen::MatrixXd X;
  Eigen::MatrixXd jbar_t;
};
DenoiseJacobian denoise_rows_with_jacobian(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                                           const CovarianceState& cov);

/// S = R^T (I - J/n) R / n, the column-centered residual Gram matrix.
/// Computed as C^T C / n with C the column-centered R, so it is PSD.
Eigen::MatrixXd residual_covariance(const Eigen::MatrixXd& R);

}  // namespace vcs::kernels
