#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace vcs {

/// Which row denoiser an algorithm applies, plus its threshold when needed.
struct DenoiserSpec {
  enum class Kind { block_soft, james_stein };

  Kind kind = Kind::block_soft;
  double tau = 0.0;  // block_soft only

  static DenoiserSpec block_soft(double tau) {
    if (tau < 0.0) throw std::invalid_argument("block_soft tau must be >= 0");
    return {Kind::block_soft, tau};
  }
  static DenoiserSpec james_stein() { return {Kind::james_stein, 0.0}; }
};

/// Regularized square root / inverse square root of a symmetric PSD matrix.
/// Eigenvalues are clipped below at max(lambda_max * 1e-10, 1e-12) so the
/// whitening stays bounded when S^t becomes numerically rank deficient.
struct CovarianceState {
  Eigen::MatrixXd sigma;     // symmetrized input
  Eigen::MatrixXd half;      // regularized sigma^{1/2}, symmetric
  Eigen::MatrixXd inv_half;  // regularized sigma^{-1/2}, symmetric
  bool floor_used = false;

  Eigen::MatrixXd regularized_sigma() const { return half * half; }
};

CovarianceState make_covariance_state(const Eigen::MatrixXd& S);

inline CovarianceState identity_covariance(int B) {
  CovarianceState c;
  c.sigma = Eigen::MatrixXd::Identity(B, B);
  c.half = c.sigma;
  c.inv_half = c.sigma;
  return c;
}

/// Block soft thresholding (1 - tau/||y||)_+ * y; zero on the boundary.
Eigen::VectorXd eta_bst(const Eigen::VectorXd& y, double tau);

/// Positive-part James-Stein (1 - (B-2)/||y||^2)_+ * y; requires B >= 3.
Eigen::VectorXd eta_js(const Eigen::VectorXd& y);

Eigen::VectorXd eta_plain(const DenoiserSpec& spec, const Eigen::VectorXd& y);

/// half * eta(inv_half * y): whiten, denoise, unwhiten.
Eigen::VectorXd eta_colored(const DenoiserSpec& spec, const Eigen::VectorXd& y,
                            const CovarianceState& cov);

/// Analytic Jacobian of the plain denoiser; zero matrix in the dead zone
/// (boundary included). Both denoisers give c(||y||) I + d(||y||) y y^T.
Eigen::MatrixXd jac_plain(const DenoiserSpec& spec, const Eigen::VectorXd& y);

/// Jacobian of the colored denoiser: half * J_plain(inv_half y) * inv_half.
Eigen::MatrixXd jac(const DenoiserSpec& spec, const Eigen::VectorXd& y,
                    const CovarianceState& cov);

/// (1/N) sum_i Jac(eta_colored)(H_row_i)^T -- note the transpose.
Eigen::MatrixXd avg_jacobian(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                             const CovarianceState& cov);

}  // namespace vcs
