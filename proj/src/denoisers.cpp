#include "vcs/denoisers.hpp"

#include "vcs/kernels.hpp"

namespace vcs {

CovarianceState make_covariance_state(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols()) throw std::invalid_argument("covariance must be square");
  if (!S.allFinite()) throw std::invalid_argument("covariance contains non-finite entries");
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw std::invalid_argument("covariance not symmetric within 1e-8");
  }
  CovarianceState out;
  out.sigma = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.sigma);
  Eigen::VectorXd lam = es.eigenvalues();
  const double lam_max = lam.maxCoeff();
  const double floor = std::max(lam_max * 1e-10, 1e-12);
  Eigen::VectorXd root(lam.size()), inv_root(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < floor) {
      out.floor_used = true;
      lam[i] = floor;
    }
    root[i] = std::sqrt(lam[i]);
    inv_root[i] = 1.0 / root[i];
  }
  const Eigen::MatrixXd& V = es.eigenvectors();
  out.half = V * root.asDiagonal() * V.transpose();
  out.inv_half = V * inv_root.asDiagonal() * V.transpose();
  return out;
}

Eigen::VectorXd eta_bst(const Eigen::VectorXd& y, double tau) {
  if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  const double nrm = y.norm();
  if (nrm <= tau) return Eigen::VectorXd::Zero(y.size());
  return y * (1.0 - tau / nrm);
}

Eigen::VectorXd eta_js(const Eigen::VectorXd& y) {
  const int B = static_cast<int>(y.size());
  if (B < 3) throw std::invalid_argument("James-Stein requires B >= 3");
  const double n2 = y.squaredNorm();
  if (n2 <= static_cast<double>(B - 2)) return Eigen::VectorXd::Zero(B);
  return y * (1.0 - (B - 2) / n2);
}

Eigen::VectorXd eta_plain(const DenoiserSpec& spec, const Eigen::VectorXd& y) {
  return spec.kind == DenoiserSpec::Kind::block_soft ? eta_bst(y, spec.tau) : eta_js(y);
}

Eigen::VectorXd eta_colored(const DenoiserSpec& spec, const Eigen::VectorXd& y,
                            const CovarianceState& cov) {
  return cov.half * eta_plain(spec, cov.inv_half * y);
}

Eigen::MatrixXd jac_plain(const DenoiserSpec& spec, const Eigen::VectorXd& y) {
  const int B = static_cast<int>(y.size());
  double c = 0.0, d = 0.0;
  if (!kernels::plain_jacobian_coeffs(spec, y, c, d)) {
    return Eigen::MatrixXd::Zero(B, B);
  }
  Eigen::MatrixXd J = d * (y * y.transpose());
  J.diagonal().array() += c;
  return J;
}

Eigen::MatrixXd jac(const DenoiserSpec& spec, const Eigen::VectorXd& y,
                    const CovarianceState& cov) {
  return cov.half * jac_plain(spec, cov.inv_half * y) * cov.inv_half;
}

Eigen::MatrixXd avg_jacobian(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                             const CovarianceState& cov) {
  if (H.rows() < 1) throw std::invalid_argument("avg_jacobian needs N >= 1");
  return kernels::avg_jacobian_t(spec, H, cov);
}

}  // namespace vcs
