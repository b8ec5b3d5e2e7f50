// Times the OpenMP kernels against their serial references on solver-sized
// inputs. Build target: vcs_bench.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "vcs/kernels.hpp"
#include "vcs/monte_carlo_risk.hpp"
#include "vcs/rng.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  using namespace vcs;
  std::printf("threads: %d\n", omp_get_max_threads());

  for (const auto& [N, B] : {std::pair{2000, 10}, std::pair{20000, 10}, std::pair{50000, 50}}) {
    Rng rng(7);
    Eigen::MatrixXd H(N, B);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < B; ++j) H(i, j) = 2.0 * rng.normal();
    Eigen::MatrixXd S = Eigen::MatrixXd::Random(B, B);
    S = (S * S.transpose()).eval();
    S.diagonal().array() += 0.5;
    const CovarianceState cov = make_covariance_state(S);
    const DenoiserSpec js = DenoiserSpec::james_stein();

    const int reps = N <= 2000 ? 200 : 20;
    const double d_par = time_ms([&] { kernels::denoise_rows(js, H, cov); }, reps);
    const double d_ser = time_ms([&] { kernels::denoise_rows_serial(js, H, cov); }, reps);
    const double j_par = time_ms([&] { kernels::avg_jacobian_t(js, H, cov); }, reps);
    const double j_ser = time_ms([&] { kernels::avg_jacobian_t_serial(js, H, cov); }, reps);
    std::printf("N=%6d B=%2d  denoise_rows %8.3f ms (serial %8.3f, x%.2f)\n", N, B, d_par, d_ser,
                d_ser / d_par);
    std::printf("N=%6d B=%2d  avg_jacobian %8.3f ms (serial %8.3f, x%.2f)\n", N, B, j_par, j_ser,
                j_ser / j_par);
  }

  {
    const SparsePrior prior{0.2, NonzeroDistribution::std_gaussian(), 10};
    const Eigen::MatrixXd sigma = 0.05 * Eigen::MatrixXd::Identity(10, 10);
    const std::int64_t n = 400000;
    const SampleBank bank = SampleBank::build(prior, n, 3);
    const CovarianceState cov = make_covariance_state(sigma);
    const DenoiserSpec js = DenoiserSpec::james_stein();
    const double t = time_ms([&] { risk_mc_with_bank(bank, prior.epsilon, js, cov); }, 10);
    std::printf("risk_mc %lld samples B=10: %8.3f ms\n", static_cast<long long>(n), t);
  }
  return 0;
}
