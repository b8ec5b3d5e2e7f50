#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "vcs/distributions.hpp"
#include "vcs/rng.hpp"

namespace vcs {

/// A row-sparse N x B signal matrix together with its true support and,
/// when generated, the descriptor of the nonzero-row distribution.
struct SignalEnsemble {
  Eigen::MatrixXd X;
  std::vector<int> support;  // sorted row indices
  double epsilon = 0.0;
  std::optional<NonzeroDistribution> dist;  // empty for ingested data
};

/// Gaussian measurement operator and the measurements it produced.
struct MeasurementSetup {
  Eigen::MatrixXd A;  // n x N, iid N(0, 1/n)
  Eigen::MatrixXd Y;  // n x B, A * X
  int n = 0;
  int N = 0;
  int B = 0;
  double delta = 0.0;  // n / N
};

struct ErrorResult {
  double err;
  bool success;  // err < success_threshold, strict
};

inline constexpr double kSuccessThreshold = 1e-3;

/// k = round(N*epsilon) distinct indices, uniform without replacement,
/// returned sorted. Throws on k == 0 or k == N ("degenerate sparsity").
std::vector<int> sample_support(int N, double epsilon, Rng& rng);

/// Row-sparse ensemble: exactly round(N*epsilon) rows drawn iid from dist
/// (in increasing row order), all other rows exactly zero.
SignalEnsemble gen_signal(int N, int B, double epsilon, const NonzeroDistribution& dist, Rng& rng);

/// n x N matrix of iid N(0, 1/n) entries. Requires 1 <= n <= N.
Eigen::MatrixXd gen_measurement(int N, int n, Rng& rng);

MeasurementSetup measure(const Eigen::MatrixXd& A, const SignalEnsemble& signal);

/// Frobenius relative error and the strict success flag.
/// Throws "vacuous signal" when X is all-zero.
ErrorResult relative_error(const Eigen::MatrixXd& xhat, const Eigen::MatrixXd& x,
                           double threshold = kSuccessThreshold);

/// Real-data path: optional log2(.+1) transform, then keep the top
/// round(N*epsilon) rows by Euclidean norm (post-transform), zeroing the
/// rest. Ties break toward the lower row index.
SignalEnsemble ingest_sparsify(const Eigen::MatrixXd& matrix, double epsilon, bool log_transform);

}  // namespace vcs
