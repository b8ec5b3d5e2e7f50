#include "vcs/kernels.hpp"

#include <vector>

namespace vcs::kernels {

namespace {

struct JacPartial {
  double c_sum = 0.0;
  Eigen::MatrixXd m;  // sum of d_i u_i u_i^T over the chunk
};

int chunk_count(Eigen::Index n) {
  return static_cast<int>((n + kRowChunk - 1) / kRowChunk);
}

}  // namespace

Eigen::MatrixXd denoise_rows(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                             const CovarianceState& cov) {
  const Eigen::Index N = H.rows();
  const Eigen::Index B = H.cols();
  Eigen::MatrixXd out(N, B);
  const int nchunks = chunk_count(N);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nchunks; ++c) {
    const Eigen::Index lo = static_cast<Eigen::Index>(c) * kRowChunk;
    const Eigen::Index len = std::min<Eigen::Index>(kRowChunk, N - lo);
    Eigen::MatrixXd U = H.middleRows(lo, len) * cov.inv_half;  // rows are inv_half * h_i
    for (Eigen::Index r = 0; r < len; ++r) {
      double cc, dd;
      Eigen::VectorXd u = U.row(r).transpose();
      if (!plain_jacobian_coeffs(spec, u, cc, dd)) {
        U.row(r).setZero();
      } else {
        U.row(r) *= cc;  // c == shrink factor for both denoisers
      }
    }
    out.middleRows(lo, len) = U * cov.half;
  }
  return out;
}

Eigen::MatrixXd denoise_rows_serial(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                                    const CovarianceState& cov) {
  const Eigen::Index N = H.rows();
  Eigen::MatrixXd out(N, H.cols());
  for (Eigen::Index i = 0; i < N; ++i) {
    out.row(i) = eta_colored(spec, H.row(i).transpose(), cov).transpose();
  }
  return out;
}

Eigen::MatrixXd avg_jacobian_t(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                               const CovarianceState& cov) {
  const Eigen::Index N = H.rows();
  const Eigen::Index B = H.cols();
  const int nchunks = chunk_count(N);
  std::vector<JacPartial> partials(nchunks);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nchunks; ++c) {
    const Eigen::Index lo = static_cast<Eigen::Index>(c) * kRowChunk;
    const Eigen::Index len = std::min<Eigen::Index>(kRowChunk, N - lo);
    JacPartial p;
    p.m = Eigen::MatrixXd::Zero(B, B);
    const Eigen::MatrixXd U = H.middleRows(lo, len) * cov.inv_half;
    for (Eigen::Index r = 0; r < len; ++r) {
      double cc, dd;
      const Eigen::VectorXd u = U.row(r).transpose();
      if (plain_jacobian_coeffs(spec, u, cc, dd)) {
        p.c_sum += cc;
        p.m.noalias() += dd * (u * u.transpose());
      }
    }
    partials[c] = std::move(p);
  }
  Eigen::MatrixXd jplain = Eigen::MatrixXd::Zero(B, B);
  double c_total = 0.0;
  for (const auto& p : partials) {  // fixed order: bitwise independent of threads
    c_total += p.c_sum;
    jplain += p.m;
  }
  jplain /= static_cast<double>(N);
  jplain.diagonal().array() += c_total / static_cast<double>(N);
  return cov.inv_half * jplain * cov.half;
}

Eigen::MatrixXd avg_jacobian_t_serial(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                                      const CovarianceState& cov) {
  const Eigen::Index N = H.rows();
  const Eigen::Index B = H.cols();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(B, B);
  for (Eigen::Index i = 0; i < N; ++i) {
    acc += jac(spec, H.row(i).transpose(), cov).transpose();
  }
  return acc / static_cast<double>(N);
}

DenoiseJacobian denoise_rows_with_jacobian(const DenoiserSpec& spec, const Eigen::MatrixXd& H,
                                           const CovarianceState& cov) {
  const Eigen::Index N = H.rows();
  const Eigen::Index B = H.cols();
  DenoiseJacobian out;
  out.X.resize(N, B);
  const int nchunks = chunk_count(N);
  std::vector<JacPartial> partials(nchunks);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nchunks; ++c) {
    const Eigen::Index lo = static_cast<Eigen::Index>(c) * kRowChunk;
    const Eigen::Index len = std::min<Eigen::Index>(kRowChunk, N - lo);
    JacPartial p;
    p.m = Eigen::MatrixXd::Zero(B, B);
    Eigen::MatrixXd U = H.middleRows(lo, len) * cov.inv_half;
    for (Eigen::Index r = 0; r < len; ++r) {
      double cc, dd;
      const Eigen::VectorXd u = U.row(r).transpose();
      if (plain_jacobian_coeffs(spec, u, cc, dd)) {
        p.c_sum += cc;
        p.m.noalias() += dd * (u * u.transpose());
        U.row(r) *= cc;
      } else {
        U.row(r).setZero();
      }
    }
    out.X.middleRows(lo, len) = U * cov.half;
    partials[c] = std::move(p);
  }
  Eigen::MatrixXd jplain = Eigen::MatrixXd::Zero(B, B);
  double c_total = 0.0;
  for (const auto& p : partials) {
    c_total += p.c_sum;
    jplain += p.m;
  }
  jplain /= static_cast<double>(N);
  jplain.diagonal().array() += c_total / static_cast<double>(N);
  out.jbar_t = cov.inv_half * jplain * cov.half;
  return out;
}

Eigen::MatrixXd residual_covariance(const Eigen::MatrixXd& R) {
  const Eigen::Index n = R.rows();
  Eigen::MatrixXd C = R.rowwise() - R.colwise().mean();
  Eigen::MatrixXd S = (C.transpose() * C) / static_cast<double>(n);
  return 0.5 * (S + S.transpose());
}

}  // namespace vcs::kernels
