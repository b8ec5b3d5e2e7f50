#include "vcs/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vcs {

namespace {

int sparsity_count(int N, double epsilon) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  const int k = static_cast<int>(std::lround(static_cast<double>(N) * epsilon));
  if (k == 0 || k == N) throw std::invalid_argument("degenerate sparsity: k=" + std::to_string(k));
  return k;
}

}  // namespace

std::vector<int> sample_support(int N, double epsilon, Rng& rng) {
  const int k = sparsity_count(N, epsilon);
  // Partial Fisher-Yates over 0..N-1.
  std::vector<int> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform() * (N - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SignalEnsemble gen_signal(int N, int B, double epsilon, const NonzeroDistribution& dist,
                          Rng& rng) {
  dist.validate(B);
  SignalEnsemble out;
  out.support = sample_support(N, epsilon, rng);
  out.epsilon = epsilon;
  out.dist = dist;
  out.X = Eigen::MatrixXd::Zero(N, B);
  for (int i : out.support) {
    out.X.row(i) = dist.sample_row(B, rng).transpose();
  }
  return out;
}

Eigen::MatrixXd gen_measurement(int N, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n > N) throw std::invalid_argument("n must be <= N");
  const double sd = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd A(n, N);
  // Row-major fill order so the layout of draws is part of the contract.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < N; ++j) {
      A(i, j) = sd * rng.normal();
    }
  }
  return A;
}

MeasurementSetup measure(const Eigen::MatrixXd& A, const SignalEnsemble& signal) {
  MeasurementSetup m;
  m.A = A;
  m.n = static_cast<int>(A.rows());
  m.N = static_cast<int>(A.cols());
  m.B = static_cast<int>(signal.X.cols());
  if (signal.X.rows() != m.N) throw std::invalid_argument("A and X dimensions disagree");
  m.delta = static_cast<double>(m.n) / static_cast<double>(m.N);
  m.Y = A * signal.X;
  return m;
}

ErrorResult relative_error(const Eigen::MatrixXd& xhat, const Eigen::MatrixXd& x,
                           double threshold) {
  if (xhat.rows() != x.rows() || xhat.cols() != x.cols()) {
    throw std::invalid_argument("relative_error: shape mismatch");
  }
  const double denom = x.norm();
  if (denom == 0.0) throw std::invalid_argument("vacuous signal");
  const double err = (xhat - x).norm() / denom;
  return {err, err < threshold};
}

SignalEnsemble ingest_sparsify(const Eigen::MatrixXd& matrix, double epsilon,
                               bool log_transform) {
  const int N = static_cast<int>(matrix.rows());
  const int B = static_cast<int>(matrix.cols());
  if (N < 1 || B < 1) throw std::invalid_argument("empty matrix");
  if (!matrix.allFinite()) throw std::invalid_argument("matrix contains non-finite entries");

  Eigen::MatrixXd X = matrix;
  if (log_transform) {
    if ((X.array() < 0.0).any()) {
      throw std::invalid_argument("negative entry under log transform");
    }
    X = (X.array() + 1.0).log() / std::log(2.0);
  }

  const int k = sparsity_count(N, epsilon);

  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(N);
  for (int i = 0; i < N; ++i) norms[i] = X.row(i).norm();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (norms[a] != norms[b]) return norms[a] > norms[b];
    return a < b;  // ties broken toward the lower index
  });

  SignalEnsemble out;
  out.epsilon = epsilon;
  out.support.assign(order.begin(), order.begin() + k);
  std::sort(out.support.begin(), out.support.end());
  out.X = Eigen::MatrixXd::Zero(N, B);
  for (int i : out.support) out.X.row(i) = X.row(i);
  if (out.X.norm() == 0.0) throw std::invalid_argument("vacuous signal");
  return out;
}

}  // namespace vcs
