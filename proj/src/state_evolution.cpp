#include "vcs/state_evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace vcs {

namespace {

SETrace se_run_on_bank(const SampleBank& bank, const SparsePrior& prior,
                       const DenoiserSpec& spec, double delta, SEKind kind,
                       const SEOptions& opts) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");
  if (opts.iters < 1) throw std::invalid_argument("iters must be >= 1");
  const int B = prior.B;

  SETrace out;
  out.kind = kind;
  out.delta = delta;

  Eigen::MatrixXd Sigma;
  if (kind == SEKind::matricial) {
    Sigma = prior.second_moment();
    out.sigmas.push_back(Sigma);
  } else {
    Sigma = prior.second_moment_scalar() * Eigen::MatrixXd::Identity(B, B);
  }
  double trace = Sigma.trace();
  const double initial_trace = trace;
  out.values.push_back(kind == SEKind::matricial ? trace : trace / B);
  out.stderrs.push_back(0.0);
  if (initial_trace <= 0.0) {
    out.converged_to_zero = true;
    return out;
  }

  // The scalar path builds the isotropic covariance exactly: the solver-side
  // eigenvalue floor would otherwise pin the noise scale near 1e-12 and keep
  // the trace from crossing the convergence threshold.
  const auto isotropic_cov = [B](double s2) {
    CovarianceState c;
    c.sigma = s2 * Eigen::MatrixXd::Identity(B, B);
    c.half = std::sqrt(s2) * Eigen::MatrixXd::Identity(B, B);
    c.inv_half = (1.0 / std::sqrt(s2)) * Eigen::MatrixXd::Identity(B, B);
    return c;
  };

  int stall_count = 0;
  for (int t = 0; t < opts.iters; ++t) {
    const double lead = Sigma(0, 0);
    const CovarianceState cov = (kind == SEKind::scalar && lead > 0.0)
                                    ? isotropic_cov(lead / delta)
                                    : make_covariance_state(Sigma / delta);
    const RiskEstimate est = risk_mc_with_bank(bank, prior.epsilon, spec, cov);
    double next_trace;
    if (kind == SEKind::matricial) {
      Sigma = est.risk_matrix;
      next_trace = Sigma.trace();
      out.sigmas.push_back(Sigma);
      out.values.push_back(next_trace);
    } else {
      Sigma = est.scalar_risk * Eigen::MatrixXd::Identity(B, B);
      next_trace = Sigma.trace();
      out.values.push_back(est.scalar_risk);
    }
    out.stderrs.push_back(est.scalar_stderr);
    if (next_trace < 1e-12 * initial_trace) {
      out.converged_to_zero = true;
      return out;
    }
    if (opts.stall_break) {
      if (t >= 10 && next_trace > trace * (1.0 - opts.stall_tol)) {
        if (++stall_count >= 3) return out;
      } else {
        stall_count = 0;
      }
    }
    trace = next_trace;
  }
  return out;
}

}  // namespace

SETrace se_run(const SparsePrior& prior, const DenoiserSpec& spec, double delta, SEKind kind,
               const SEOptions& opts) {
  const SampleBank bank = SampleBank::build(prior, opts.samples, opts.seed);
  return se_run_on_bank(bank, prior, spec, delta, kind, opts);
}

PTPrediction predict_pt_se(const SparsePrior& prior, const DenoiserSpec& spec,
                           std::int64_t samples, std::uint64_t seed) {
  // Inner runs are scalar (the symmetric exchangeable reduction) with a deep
  // iteration cap; the classification boundary sits about log(1e12)/T above
  // the true fixed-point threshold in relative terms, well inside the
  // bisection bracket for T = 2000.
  SEOptions opts;
  opts.iters = 2000;
  opts.samples = samples;
  opts.stall_break = true;

  for (int attempt = 0; attempt < 2; ++attempt) {
    opts.seed = hash_combine(seed, static_cast<std::uint64_t>(attempt));
    const SampleBank bank = SampleBank::build(prior, opts.samples, opts.seed);
    const auto converges = [&](double delta) {
      return se_run_on_bank(bank, prior, spec, delta, SEKind::scalar, opts).converged_to_zero;
    };
    if (!converges(0.99)) {
      // MC noise can flip an endpoint; widen the bank once and retry.
      opts.samples *= 4;
      continue;
    }
    double lo = 0.0, hi = 1.0;  // lo: assumed failing, hi: assumed converging
    for (int step = 0; step < 20; ++step) {
      const double mid = 0.5 * (lo + hi);
      (converges(mid) ? hi : lo) = mid;
    }
    return {0.5 * (lo + hi), std::ldexp(1.0, -21)};
  }
  throw std::runtime_error("nonmonotone state-evolution outcomes across the bracket");
}

}  // namespace vcs
