#include <doctest.h>

#include <cmath>

#include "vcs/denoisers.hpp"
#include "vcs/rng.hpp"

using namespace vcs;

namespace {

Eigen::VectorXd random_vec(int B, Rng& rng, double scale = 1.0) {
  Eigen::VectorXd v(B);
  for (int i = 0; i < B; ++i) v[i] = scale * rng.normal();
  return v;
}

Eigen::MatrixXd random_spd(int B, Rng& rng) {
  Eigen::MatrixXd G(B, B);
  for (int i = 0; i < B; ++i)
    for (int j = 0; j < B; ++j) G(i, j) = rng.normal();
  Eigen::MatrixXd S = G * G.transpose() / B;
  S.diagonal().array() += 0.3;
  return S;
}

Eigen::MatrixXd random_orthogonal(int B, Rng& rng) {
  Eigen::MatrixXd G(B, B);
  for (int i = 0; i < B; ++i)
    for (int j = 0; j < B; ++j) G(i, j) = rng.normal();
  return Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
}

// Derivative-free prox oracle. The objective ||x|| + ||y-x||^2/(2 tau) only
// improves by dropping any component orthogonal to y, so the argmin is c*y
// with c >= 0; golden-section on that convex 1-D slice.
Eigen::VectorXd prox_oracle(const Eigen::VectorXd& y, double tau) {
  const double ny = y.norm();
  const auto obj = [&](double c) {
    return c * ny + (1.0 - c) * (1.0 - c) * ny * ny / (2.0 * tau);
  };
  double lo = 0.0, hi = 2.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = obj(a), fb = obj(b);
  for (int i = 0; i < 200; ++i) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = obj(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = obj(b);
    }
  }
  const double c = 0.5 * (lo + hi);
  return (c < 1e-12 ? 0.0 : c) * y;
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& y, double step = 1e-5) {
  const int B = static_cast<int>(y.size());
  Eigen::MatrixXd J(B, B);
  for (int j = 0; j < B; ++j) {
    Eigen::VectorXd hi = y, lo = y;
    hi[j] += step;
    lo[j] -= step;
    J.col(j) = (f(hi) - f(lo)) / (2.0 * step);
  }
  return J;
}

}  // namespace

TEST_CASE("eta_bst basics") {
  Eigen::VectorXd y(2);
  y << 3.0, 4.0;
  const Eigen::VectorXd out = eta_bst(y, 2.5);
  CHECK(out[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(2.0).epsilon(1e-12));

  CHECK(eta_bst(y, 5.0).norm() == 0.0);   // ||y|| = 5 <= tau: boundary kills
  CHECK(eta_bst(y, 0.0) == y);            // tau = 0: identity
  CHECK(eta_bst(Eigen::VectorXd::Zero(3), 1.0).norm() == 0.0);
  CHECK_THROWS_AS(eta_bst(y, -1.0), std::invalid_argument);
}

TEST_CASE("eta_bst agrees with the prox oracle") {
  Rng rng(31);
  for (int B : {2, 5}) {
    for (int i = 0; i < 60; ++i) {
      const Eigen::VectorXd y = random_vec(B, rng, 2.0);
      const double tau = 0.1 + 2.0 * rng.uniform();
      if (std::abs(y.norm() - tau) < 0.05) continue;  // keep off the kink
      const Eigen::VectorXd expect = prox_oracle(y, tau);
      CHECK((eta_bst(y, tau) - expect).norm() < 1e-6);
    }
  }
}

TEST_CASE("eta_js basics") {
  Eigen::VectorXd y4(4);
  y4 << 2.0, 0.0, 0.0, 0.0;
  const Eigen::VectorXd out = eta_js(y4);
  CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-12));  // factor 1 - 2/4
  CHECK(out.tail(3).norm() == 0.0);

  Eigen::VectorXd small(3);
  small << 0.5, 0.5, 0.5;  // ||y||^2 = 0.75 <= 1
  CHECK(eta_js(small).norm() == 0.0);

  Eigen::VectorXd y2(2);
  y2 << 1.0, 2.0;
  CHECK_THROWS_WITH_AS(eta_js(y2), doctest::Contains("B >= 3"), std::invalid_argument);
}

TEST_CASE("shrinkage: ||eta(y)|| <= ||y|| for both denoisers") {
  Rng rng(33);
  for (int i = 0; i < 300; ++i) {
    const Eigen::VectorXd y = random_vec(5, rng, 3.0);
    CHECK(eta_bst(y, 0.7).norm() <= y.norm() + 1e-15);
    CHECK(eta_js(y).norm() <= y.norm() + 1e-15);
  }
}

TEST_CASE("spherical equivariance of the plain denoisers") {
  Rng rng(34);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd y = random_vec(6, rng, 2.0);
    const Eigen::MatrixXd Q = random_orthogonal(6, rng);
    CHECK((eta_js(Q * y) - Q * eta_js(y)).norm() < 1e-12 * std::max(1.0, y.norm()));
    CHECK((eta_bst(Q * y, 1.1) - Q * eta_bst(y, 1.1)).norm() < 1e-12 * std::max(1.0, y.norm()));
  }
}

TEST_CASE("make_covariance_state: identity, diagonal, rank deficient") {
  const auto id = make_covariance_state(Eigen::MatrixXd::Identity(3, 3));
  CHECK(id.half.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
  CHECK(id.inv_half.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
  CHECK_FALSE(id.floor_used);

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 4.0;
  D(1, 1) = 1.0;
  const auto dc = make_covariance_state(D);
  CHECK(dc.half(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(dc.half(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dc.inv_half(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2, 2);
  R(0, 0) = 1.0;
  const auto rc = make_covariance_state(R);
  CHECK(rc.floor_used);
  CHECK(rc.inv_half.allFinite());

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, std::nan(""), 0.0, 1.0;
  CHECK_THROWS_AS(make_covariance_state(bad), std::invalid_argument);
}

TEST_CASE("covariance state invariants on random SPD input") {
  Rng rng(35);
  for (int i = 0; i < 30; ++i) {
    const Eigen::MatrixXd S = random_spd(5, rng);
    const auto cov = make_covariance_state(S);
    CHECK((cov.half * cov.half - cov.regularized_sigma()).norm() <
          1e-10 * cov.regularized_sigma().norm());
    CHECK((cov.inv_half * cov.half - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
  }
}

TEST_CASE("eta_colored: identity cov equals plain, zero maps to zero") {
  Rng rng(36);
  const auto id = identity_covariance(4);
  const Eigen::VectorXd y = random_vec(4, rng, 2.0);
  CHECK(eta_colored(DenoiserSpec::james_stein(), y, id) == eta_js(y));
  CHECK(eta_colored(DenoiserSpec::block_soft(0.9), y, id) == eta_bst(y, 0.9));
  const auto cov = make_covariance_state(random_spd(4, rng));
  CHECK(eta_colored(DenoiserSpec::james_stein(), Eigen::VectorXd::Zero(4), cov).norm() == 0.0);
}

TEST_CASE("eta_colored equivariance under orthogonal conjugation") {
  Rng rng(37);
  for (const auto spec : {DenoiserSpec::james_stein(), DenoiserSpec::block_soft(0.8)}) {
    for (int i = 0; i < 25; ++i) {
      const Eigen::VectorXd y = random_vec(5, rng, 2.0);
      const Eigen::MatrixXd Q = random_orthogonal(5, rng);
      const auto cov = make_covariance_state(random_spd(5, rng));
      const auto cov_rot = make_covariance_state(Q * cov.sigma * Q.transpose());
      const Eigen::VectorXd lhs = eta_colored(spec, Q * y, cov_rot);
      const Eigen::VectorXd rhs = Q * eta_colored(spec, y, cov);
      CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("colored denoiser with isotropic cov is the scaled plain denoiser") {
  Rng rng(38);
  const double s = 1.7;
  const auto cov = make_covariance_state(s * s * Eigen::MatrixXd::Identity(5, 5));
  for (int i = 0; i < 40; ++i) {
    const Eigen::VectorXd y = random_vec(5, rng, 3.0);
    const Eigen::VectorXd expect = s * eta_js(y / s);
    CHECK((eta_colored(DenoiserSpec::james_stein(), y, cov) - expect).norm() < 1e-12);
  }
}

TEST_CASE("jacobian: dead zone, tau=0 identity, symmetry") {
  const auto id = identity_covariance(3);
  Eigen::VectorXd small(3);
  small << 0.1, 0.1, 0.1;
  CHECK(jac(DenoiserSpec::james_stein(), small, id).norm() == 0.0);
  CHECK(jac(DenoiserSpec::block_soft(1.0), small, id).norm() == 0.0);

  Rng rng(39);
  const Eigen::VectorXd y = random_vec(3, rng);
  CHECK(jac(DenoiserSpec::block_soft(0.0), y, id).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));

  for (int i = 0; i < 40; ++i) {
    const Eigen::VectorXd u = random_vec(4, rng, 2.5);
    const Eigen::MatrixXd Jb = jac_plain(DenoiserSpec::block_soft(0.6), u);
    const Eigen::MatrixXd Jj = jac_plain(DenoiserSpec::james_stein(), u);
    CHECK((Jb - Jb.transpose()).norm() < 1e-12);
    CHECK((Jj - Jj.transpose()).norm() < 1e-12);
  }
}

TEST_CASE("analytic jacobian matches central finite differences") {
  Rng rng(40);
  for (int B : {3, 5, 10}) {
    for (const auto spec : {DenoiserSpec::james_stein(), DenoiserSpec::block_soft(1.2)}) {
      const auto cov = make_covariance_state(random_spd(B, rng));
      int done = 0;
      while (done < 30) {
        const Eigen::VectorXd y = random_vec(B, rng, 2.0);
        const Eigen::VectorXd u = cov.inv_half * y;
        // stay away from the dead-zone boundary so differences are one-sided
        const double margin = spec.kind == DenoiserSpec::Kind::block_soft
                                  ? std::abs(u.norm() - spec.tau)
                                  : std::abs(u.squaredNorm() - (B - 2));
        if (margin < 0.1) continue;
        const Eigen::MatrixXd J = jac(spec, y, cov);
        const Eigen::MatrixXd Jfd =
            fd_jacobian([&](const Eigen::VectorXd& v) { return eta_colored(spec, v, cov); }, y);
        const double rel = (J - Jfd).norm() / std::max(Jfd.norm(), 1e-8);
        CHECK(rel < 1e-6);
        ++done;
      }
    }
  }
}

TEST_CASE("avg_jacobian: dead rows, single row, finite-difference average") {
  const auto id = identity_covariance(4);
  const auto js = DenoiserSpec::james_stein();

  Eigen::MatrixXd dead = 0.1 * Eigen::MatrixXd::Ones(6, 4);
  CHECK(avg_jacobian(js, dead, id).norm() == 0.0);

  Rng rng(41);
  Eigen::MatrixXd one(1, 4);
  one << 3.0, -1.0, 0.5, 2.0;
  const auto cov = make_covariance_state(random_spd(4, rng));
  CHECK(avg_jacobian(js, one, cov)
            .isApprox(jac(js, one.row(0).transpose(), cov).transpose(), 1e-12));

  Eigen::MatrixXd H(20, 4);
  for (int i = 0; i < 20; ++i) H.row(i) = random_vec(4, rng, 2.5).transpose();
  Eigen::MatrixXd fd_avg = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 20; ++i) {
    fd_avg += fd_jacobian([&](const Eigen::VectorXd& v) { return eta_colored(js, v, cov); },
                          H.row(i).transpose())
                  .transpose();
  }
  fd_avg /= 20.0;
  CHECK((avg_jacobian(js, H, cov) - fd_avg).norm() < 1e-5);
}
