#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "vcs/denoisers.hpp"
#include "vcs/distributions.hpp"

namespace vcs {

/// The epsilon-sparse mixture (1-epsilon) delta_0 + epsilon * nonzero on R^B.
struct SparsePrior {
  double epsilon;
  NonzeroDistribution nonzero;
  int B;

  Eigen::MatrixXd second_moment() const;  // integral of x x^T d mu
  double second_moment_scalar() const;    // integral of ||x||^2 d mu / B
};

/// Frozen draws for the two mixture strata; rebuilding with the same seed
/// reproduces them exactly, which is how common random numbers are shared
/// across state-evolution iterations and bisection steps.
struct SampleBank {
  Eigen::MatrixXd z0;  // noise for the zero stratum, n0 x B
  Eigen::MatrixXd z1;  // noise for the nonzero stratum, n1 x B
  Eigen::MatrixXd m1;  // nonzero means, n1 x B

  static SampleBank build(const SparsePrior& prior, std::int64_t samples, std::uint64_t seed);
};

struct RiskEstimate {
  Eigen::MatrixXd risk_matrix;  // B x B
  double scalar_risk = 0.0;     // trace / B
  double scalar_stderr = 0.0;
};

/// Monte-Carlo estimate of the risk matrix E[(eta(m + Sigma^{1/2} z) - m)(.)^T]
/// and its trace/B, stratified over the mixture. The zero stratum reduces to a
/// radial average: whitening cancels there, the error is Sigma^{1/2} eta(z),
/// and E[eta(z) eta(z)^T] is a multiple of the identity exactly (spherical
/// symmetry of z with a norm-driven denoiser), so that stratum contributes a
/// scalar times the regularized Sigma and no off-diagonal sampling noise.
RiskEstimate risk_mc(const SparsePrior& prior, const DenoiserSpec& spec,
                     const Eigen::MatrixXd& Sigma, std::int64_t samples, std::uint64_t seed);

/// Same estimator on a prebuilt bank (the production path inside state
/// evolution; deterministic for any thread count).
RiskEstimate risk_mc_with_bank(const SampleBank& bank, double epsilon, const DenoiserSpec& spec,
                               const CovarianceState& cov);

}  // namespace vcs
