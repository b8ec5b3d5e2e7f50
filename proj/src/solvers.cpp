#include "vcs/solvers.hpp"

#include <cmath>

#include "vcs/kernels.hpp"
#include "vcs/minimax_risk.hpp"

namespace vcs {

namespace {

void check_finite(const Eigen::MatrixXd& m, int iter) {
  if (!m.allFinite()) throw DivergedError(iter);
}

double rel_change(const Eigen::MatrixXd& next, const Eigen::MatrixXd& cur) {
  return (next - cur).norm() / std::max(cur.norm(), 1e-30);
}

}  // namespace

SolveResult general_vcs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                        const DenoiserSchedule& schedule, const SolveOptions& opts) {
  const int n = static_cast<int>(A.rows());
  const int N = static_cast<int>(A.cols());
  const int B = static_cast<int>(Y.cols());
  if (Y.rows() != n) throw std::invalid_argument("A and Y row counts disagree");
  if (opts.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  const double delta = static_cast<double>(n) / N;
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");

  Eigen::MatrixXd X = opts.initial_x ? *opts.initial_x : Eigen::MatrixXd::Zero(N, B);
  Eigen::MatrixXd R_prev;    // R^{t-1}
  Eigen::MatrixXd jbar_t;    // (1/N) sum Jac(eta_colored)(H^t; S^{t-1})^T
  SolveResult out;

  for (int t = 0; t < opts.max_iters; ++t) {
    Eigen::MatrixXd R = Y - A * X;
    if (t > 0) {
      R.noalias() += (1.0 / delta) * (R_prev * jbar_t);
    }
    check_finite(R, t);
    const Eigen::MatrixXd S = kernels::residual_covariance(R);
    check_finite(S, t);
    const CovarianceState cov = make_covariance_state(S);
    Eigen::MatrixXd H = X + A.transpose() * R;
    check_finite(H, t);
    const DenoiserSpec spec = schedule(t);
    auto dj = kernels::denoise_rows_with_jacobian(spec, H, cov);
    check_finite(dj.X, t);
    if (opts.record_trace) out.trace.push_back({R.norm(), S.trace()});

    const double change = rel_change(dj.X, X);
    X = std::move(dj.X);
    jbar_t = std::move(dj.jbar_t);
    R_prev = std::move(R);
    out.iters = t + 1;
    if (change < opts.converge_tol) {
      out.converged = true;
      break;
    }
  }

  out.xhat = std::move(X);
  out.residual_norm = (Y - A * out.xhat).norm();
  return out;
}

SolveResult softsense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y, double epsilon_for_tau,
                      const SolveOptions& opts) {
  if (!(epsilon_for_tau > 0.0 && epsilon_for_tau < 1.0)) {
    throw std::invalid_argument("epsilon_for_tau must lie in (0,1)");
  }
  const int B = static_cast<int>(Y.cols());
  const DenoiserSpec spec = DenoiserSpec::block_soft(tau_minimax(epsilon_for_tau, B));
  return general_vcs(A, Y, [spec](int) { return spec; }, opts);
}

SolveResult steinsense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                       const SolveOptions& opts) {
  if (Y.cols() < 3) throw std::invalid_argument("James-Stein requires B >= 3");
  const DenoiserSpec spec = DenoiserSpec::james_stein();
  return general_vcs(A, Y, [spec](int) { return spec; }, opts);
}

SolveResult array_amp(const Eigen::MatrixXd& A_arr, const Eigen::VectorXd& y_arr,
                      const DenoiserSpec& spec, int B, const SolveOptions& opts) {
  const int n = static_cast<int>(A_arr.rows());
  const Eigen::Index NB = A_arr.cols();
  if (B < 1 || NB % B != 0) throw std::invalid_argument("column count must be divisible by B");
  if (y_arr.size() != n) throw std::invalid_argument("A and y sizes disagree");
  const Eigen::Index N = NB / B;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(NB);
  Eigen::VectorXd r_prev;
  double div_prev = 0.0;
  SolveResult out;

  for (int t = 0; t < opts.max_iters; ++t) {
    Eigen::VectorXd r = y_arr - A_arr * x;
    if (t > 0) {
      r.noalias() += (static_cast<double>(NB) / n) * div_prev * r_prev;
    }
    check_finite(r, t);
    const double sigma2 = std::max(r.squaredNorm() / n, 1e-24);
    const CovarianceState cov =
        make_covariance_state(sigma2 * Eigen::MatrixXd::Identity(B, B));
    Eigen::VectorXd h = x + A_arr.transpose() * r;
    check_finite(h, t);

    // Blockwise colored denoise; div = average diagonal of the block
    // Jacobians, which for the isotropic cov equals the plain-Jacobian trace.
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        Hmat(h.data(), N, B);
    auto dj = kernels::denoise_rows_with_jacobian(spec, Hmat, cov);
    check_finite(dj.X, t);
    const double div = dj.jbar_t.trace() / B;  // (1/NB) sum of diagonal entries

    Eigen::VectorXd xn(NB);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        xn.data(), N, B) = dj.X;
    if (opts.record_trace) out.trace.push_back({r.norm(), sigma2 * B});

    const double change = (xn - x).norm() / std::max(x.norm(), 1e-30);
    x = std::move(xn);
    div_prev = div;
    r_prev = std::move(r);
    out.iters = t + 1;
    if (change < opts.converge_tol) {
      out.converged = true;
      break;
    }
  }

  out.xhat.resize(N, B);
  for (Eigen::Index i = 0; i < N; ++i) {
    out.xhat.row(i) = x.segment(i * B, B).transpose();
  }
  out.residual_norm = (y_arr - A_arr * x).norm();
  return out;
}

SolveResult group_bp_admm(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                          const AdmmOptions& opts) {
  const int n = static_cast<int>(A.rows());
  const int N = static_cast<int>(A.cols());
  const int B = static_cast<int>(Y.cols());
  const double delta = static_cast<double>(n) / N;
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");

  Eigen::LLT<Eigen::MatrixXd> llt(A * A.transpose());
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("rank-deficient A A^T: Cholesky failed");
  }
  const auto project = [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd {
    // argmin ||X - W||_F subject to A X = Y
    return W - A.transpose() * llt.solve(A * W - Y);
  };

  const double tau = 1.0 / opts.rho;
  Eigen::MatrixXd X = project(Eigen::MatrixXd::Zero(N, B));
  Eigen::MatrixXd Z = X;
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(N, B);
  const CovarianceState eye = identity_covariance(B);
  const DenoiserSpec shrink = DenoiserSpec::block_soft(tau);
  SolveResult out;

  for (int t = 0; t < opts.max_iters; ++t) {
    X = project(Z - U);
    const Eigen::MatrixXd Zn = kernels::denoise_rows(shrink, X + U, eye);
    const double dual = opts.rho * (Zn - Z).norm();
    Z = Zn;
    U += X - Z;
    const double primal = (X - Z).norm();
    if (opts.record_trace) out.trace.push_back({primal, dual});
    check_finite(X, t);
    out.iters = t + 1;
    const double scale = std::max({1.0, X.norm(), Z.norm()});
    if (primal <= opts.tol * scale && dual <= opts.tol * scale) {
      out.converged = true;
      break;
    }
  }

  out.xhat = std::move(X);
  out.residual_norm = (Y - A * out.xhat).norm();
  return out;
}

Eigen::MatrixXd oracle_recover(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y,
                               const std::vector<int>& support) {
  const int n = static_cast<int>(A.rows());
  const int k = static_cast<int>(support.size());
  if (n < k) throw std::invalid_argument("underdetermined even for oracle: n < |support|");
  Eigen::MatrixXd As(n, k);
  for (int j = 0; j < k; ++j) As.col(j) = A.col(support[j]);
  const Eigen::MatrixXd W = As.colPivHouseholderQr().solve(Y);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(A.cols(), Y.cols());
  for (int j = 0; j < k; ++j) X.row(support[j]) = W.row(j);
  return X;
}

}  // namespace vcs
