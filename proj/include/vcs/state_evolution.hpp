#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vcs/monte_carlo_risk.hpp"

namespace vcs {

enum class SEKind { scalar, matricial };

/// One state-evolution run. values[t] is sigma^2_t (scalar) or trace(Sigma_t)
/// (matricial); sigmas keeps the full matrices for matricial runs. Entry 0 is
/// the prior's second moment. stderrs[t] is the Monte-Carlo standard error of
/// the step that produced entry t (0 for the analytic initial value).
struct SETrace {
  SEKind kind;
  double delta;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<Eigen::MatrixXd> sigmas;  // matricial only
  bool converged_to_zero = false;
};

struct SEOptions {
  int iters = 200;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  // When set, a run whose trace shrinks by less than stall_tol per step for
  // three consecutive steps (after step 10) stops early as non-converging.
  bool stall_break = false;
  double stall_tol = 1e-3;
};

/// sigma^2_{t+1} = R(mu; eta, (sigma^2_t/delta) I)  (scalar) or
/// Sigma_{t+1} = Riskmatrix(mu; eta, Sigma_t/delta) (matricial), risks by
/// risk_mc on a bank shared across iterations (common random numbers).
/// Converged when the trace falls below 1e-12 of its initial value.
SETrace se_run(const SparsePrior& prior, const DenoiserSpec& spec, double delta, SEKind kind,
               const SEOptions& opts);

struct PTPrediction {
  double delta_star;
  double bracket_halfwidth;  // 2^-21 after 20 bisection steps on (0,1)
};

/// Bisection on delta over converged_to_zero(se_run), 20 steps. Verifies the
/// upper endpoint converges first; on a failed endpoint check the sample
/// count is widened once (x4) before giving up.
PTPrediction predict_pt_se(const SparsePrior& prior, const DenoiserSpec& spec,
                           std::int64_t samples, std::uint64_t seed);

}  // namespace vcs
