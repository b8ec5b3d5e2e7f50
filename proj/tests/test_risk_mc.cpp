#include <doctest.h>

#include <cmath>

#include "vcs/minimax_risk.hpp"
#include "vcs/monte_carlo_risk.hpp"

using namespace vcs;

TEST_CASE("prior second moments") {
  const SparsePrior p{0.25, NonzeroDistribution::sphere_shell(4.0), 8};
  CHECK(p.second_moment().isApprox(0.25 * 2.0 * Eigen::MatrixXd::Identity(8, 8), 1e-12));
  CHECK(p.second_moment_scalar() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("risk at the pure-noise prior matches the quadrature value") {
  // epsilon = 0: the James-Stein risk at zero, cross-checked against r_js_zero.
  const SparsePrior prior{0.0, NonzeroDistribution::std_gaussian(), 6};
  const auto est = risk_mc(prior, DenoiserSpec::james_stein(),
                           Eigen::MatrixXd::Identity(6, 6), 400000, 7);
  CHECK(std::abs(est.scalar_risk - r_js_zero(6)) < 3.0 * est.scalar_stderr + 1e-9);
}

TEST_CASE("identity denoiser (tau = 0) passes Sigma through") {
  Eigen::MatrixXd Sigma(3, 3);
  Sigma << 2.0, 0.3, 0.0,
           0.3, 1.0, -0.2,
           0.0, -0.2, 0.5;
  const SparsePrior prior{0.3, NonzeroDistribution::std_gaussian(), 3};
  const auto est = risk_mc(prior, DenoiserSpec::block_soft(0.0), Sigma, 300000, 11);
  CHECK((est.risk_matrix - Sigma).cwiseAbs().maxCoeff() < 0.03);
  CHECK(std::abs(est.scalar_risk - Sigma.trace() / 3.0) < 4.0 * est.scalar_stderr + 1e-9);
}

TEST_CASE("symmetric exchangeable prior keeps the risk matrix near isotropic") {
  const SparsePrior prior{0.2, NonzeroDistribution::std_gaussian(), 5};
  const auto est = risk_mc(prior, DenoiserSpec::james_stein(),
                           0.25 * Eigen::MatrixXd::Identity(5, 5), 400000, 13);
  const double diag_scale = est.risk_matrix.trace() / 5.0;
  double max_off = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) max_off = std::max(max_off, std::abs(est.risk_matrix(i, j)));
  CHECK(max_off / diag_scale < 0.02);
}

TEST_CASE("symmetrization preserves the scalar risk of norm-driven denoisers") {
  // Base prior is neither symmetric nor exchangeable.
  const auto base = NonzeroDistribution::poisson_hetero({1, 2, 3, 4});
  const SparsePrior raw{0.3, base, 4};
  const SparsePrior sym{0.3, symmetrize_sampler(base), 4};
  const Eigen::MatrixXd Sigma = 0.8 * Eigen::MatrixXd::Identity(4, 4);
  for (const auto spec : {DenoiserSpec::james_stein(), DenoiserSpec::block_soft(1.0)}) {
    const auto a = risk_mc(raw, spec, Sigma, 400000, 17);
    const auto b = risk_mc(sym, spec, Sigma, 400000, 18);
    const double se = std::hypot(a.scalar_stderr, b.scalar_stderr);
    CHECK(std::abs(a.scalar_risk - b.scalar_risk) < 3.0 * se);
  }
}

TEST_CASE("sample bank is deterministic and thread-count independent") {
  const SparsePrior prior{0.2, NonzeroDistribution::std_gaussian(), 4};
  const auto a = SampleBank::build(prior, 10000, 3);
  const auto b = SampleBank::build(prior, 10000, 3);
  CHECK(a.z0 == b.z0);
  CHECK(a.z1 == b.z1);
  CHECK(a.m1 == b.m1);
  const auto est1 = risk_mc(prior, DenoiserSpec::james_stein(),
                            Eigen::MatrixXd::Identity(4, 4), 10000, 3);
  const auto est2 = risk_mc(prior, DenoiserSpec::james_stein(),
                            Eigen::MatrixXd::Identity(4, 4), 10000, 3);
  CHECK(est1.risk_matrix == est2.risk_matrix);
  CHECK(est1.scalar_risk == est2.scalar_risk);
}

TEST_CASE("degenerate Sigma is handled through the covariance floor") {
  const SparsePrior prior{0.2, NonzeroDistribution::std_gaussian(), 3};
  Eigen::MatrixXd Sigma = Eigen::MatrixXd::Zero(3, 3);
  Sigma(0, 0) = 1.0;  // rank one
  const auto est = risk_mc(prior, DenoiserSpec::james_stein(), Sigma, 20000, 19);
  CHECK(std::isfinite(est.scalar_risk));
  CHECK(est.risk_matrix.allFinite());
}
