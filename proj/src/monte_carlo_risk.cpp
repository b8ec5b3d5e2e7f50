#include "vcs/monte_carlo_risk.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vcs/kernels.hpp"

namespace vcs {

Eigen::MatrixXd SparsePrior::second_moment() const {
  return epsilon * nonzero.second_moment_matrix(B);
}

double SparsePrior::second_moment_scalar() const { return second_moment().trace() / B; }

SampleBank SampleBank::build(const SparsePrior& prior, std::int64_t samples,
                             std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  prior.nonzero.validate(prior.B);
  const std::int64_t n0 = std::max<std::int64_t>(1, samples / 2);
  const std::int64_t n1 = std::max<std::int64_t>(1, samples - n0);
  const int B = prior.B;
  SampleBank bank;
  bank.z0.resize(n0, B);
  bank.z1.resize(n1, B);
  bank.m1.resize(n1, B);
  constexpr std::int64_t kChunk = 8192;
  const std::int64_t chunks0 = (n0 + kChunk - 1) / kChunk;
  const std::int64_t chunks1 = (n1 + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks0 + chunks1; ++c) {
    if (c < chunks0) {
      const std::int64_t lo = c * kChunk;
      const std::int64_t hi = std::min(n0, lo + kChunk);
      Rng rng(hash_combine(hash_combine(seed, 0), static_cast<std::uint64_t>(c)));
      for (std::int64_t i = lo; i < hi; ++i) {
        for (int j = 0; j < B; ++j) bank.z0(i, j) = rng.normal();
      }
    } else {
      const std::int64_t cc = c - chunks0;
      const std::int64_t lo = cc * kChunk;
      const std::int64_t hi = std::min(n1, lo + kChunk);
      Rng rng(hash_combine(hash_combine(seed, 1), static_cast<std::uint64_t>(cc)));
      for (std::int64_t i = lo; i < hi; ++i) {
        for (int j = 0; j < B; ++j) bank.z1(i, j) = rng.normal();
        bank.m1.row(i) = prior.nonzero.sample_row(B, rng).transpose();
      }
    }
  }
  return bank;
}

namespace {

struct StratumPartial {
  double sum = 0.0;     // per-sample scalar contributions
  double sum_sq = 0.0;
  Eigen::MatrixXd m;    // nonzero stratum: sum of error outer products
};

}  // namespace

RiskEstimate risk_mc_with_bank(const SampleBank& bank, double epsilon, const DenoiserSpec& spec,
                               const CovarianceState& cov) {
  const int B = static_cast<int>(bank.z0.cols());
  const std::int64_t n0 = bank.z0.rows();
  const std::int64_t n1 = bank.z1.rows();
  const Eigen::MatrixXd sigma_reg = cov.regularized_sigma();
  constexpr std::int64_t kChunk = 8192;

  // Zero stratum: q_i = ||eta(z_i)||^2 / B, risk matrix (1/n0) sum q_i * sigma_reg.
  const std::int64_t chunks0 = (n0 + kChunk - 1) / kChunk;
  std::vector<StratumPartial> part0(chunks0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks0; ++c) {
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(n0, lo + kChunk);
    StratumPartial p;
    for (std::int64_t i = lo; i < hi; ++i) {
      const Eigen::VectorXd e = eta_plain(spec, bank.z0.row(i).transpose());
      const double q = e.squaredNorm() / B;
      p.sum += q;
      p.sum_sq += q * q;
    }
    part0[c] = std::move(p);
  }
  double q_sum = 0.0, q_sq = 0.0;
  for (const auto& p : part0) {
    q_sum += p.sum;
    q_sq += p.sum_sq;
  }
  const double q_mean = q_sum / n0;
  const double tr_scale = sigma_reg.trace() / B;
  const double q_var = std::max(0.0, q_sq / n0 - q_mean * q_mean);

  // Nonzero stratum: full outer products of eta_colored(m + half z) - m.
  const std::int64_t chunks1 = (n1 + kChunk - 1) / kChunk;
  std::vector<StratumPartial> part1(chunks1);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks1; ++c) {
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(n1, lo + kChunk);
    StratumPartial p;
    p.m = Eigen::MatrixXd::Zero(B, B);
    for (std::int64_t i = lo; i < hi; ++i) {
      const Eigen::VectorXd y = bank.m1.row(i).transpose() + cov.half * bank.z1.row(i).transpose();
      const Eigen::VectorXd e =
          cov.half * eta_plain(spec, cov.inv_half * y) - bank.m1.row(i).transpose();
      p.m.noalias() += e * e.transpose();
      const double s = e.squaredNorm() / B;
      p.sum += s;
      p.sum_sq += s * s;
    }
    part1[c] = std::move(p);
  }
  Eigen::MatrixXd m1_sum = Eigen::MatrixXd::Zero(B, B);
  double s_sum = 0.0, s_sq = 0.0;
  for (const auto& p : part1) {
    m1_sum += p.m;
    s_sum += p.sum;
    s_sq += p.sum_sq;
  }
  const double s_mean = s_sum / n1;
  const double s_var = std::max(0.0, s_sq / n1 - s_mean * s_mean);

  RiskEstimate out;
  out.risk_matrix = (1.0 - epsilon) * q_mean * sigma_reg + (epsilon / n1) * m1_sum;
  out.scalar_risk = (1.0 - epsilon) * q_mean * tr_scale + epsilon * s_mean;
  const double w0 = (1.0 - epsilon) * tr_scale;
  out.scalar_stderr =
      std::sqrt(w0 * w0 * q_var / n0 + epsilon * epsilon * s_var / n1);
  return out;
}

RiskEstimate risk_mc(const SparsePrior& prior, const DenoiserSpec& spec,
                     const Eigen::MatrixXd& Sigma, std::int64_t samples, std::uint64_t seed) {
  const SampleBank bank = SampleBank::build(prior, samples, seed);
  return risk_mc_with_bank(bank, prior.epsilon, spec, make_covariance_state(Sigma));
}

}  // namespace vcs
