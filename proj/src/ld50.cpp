#include "vcs/ld50.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace vcs {

namespace {

constexpr double kRidge = 1e-8;
constexpr int kIrlsMaxIters = 100;
constexpr double kIrlsTol = 1e-10;

Eigen::VectorXd irls_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::Index p = X.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int it = 0; it < kIrlsMaxIters; ++it) {
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd mu(eta.size()), w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double e = 1.0 / (1.0 + std::exp(-eta[i]));
      mu[i] = std::min(std::max(e, 1e-12), 1.0 - 1e-12);
      w[i] = mu[i] * (1.0 - mu[i]);
    }
    // Newton step on the ridge-penalized normal equations.
    Eigen::MatrixXd XtWX = X.transpose() * w.asDiagonal() * X;
    XtWX.diagonal().array() += kRidge;
    const Eigen::VectorXd grad = X.transpose() * (y - mu) - kRidge * beta;
    const Eigen::VectorXd step = XtWX.ldlt().solve(grad);
    beta += step;
    if (step.cwiseAbs().maxCoeff() < kIrlsTol) break;
  }
  return beta;
}

double eval_poly(const Eigen::VectorXd& c, double x) {
  double v = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) v = v * x + c[k];
  return v;
}

// Real roots of the fitted polynomial on [0,1]: scan for sign changes on a
// fine grid, refine by bisection.
std::vector<double> poly_roots_01(const Eigen::VectorXd& c) {
  std::vector<double> roots;
  constexpr int kGrid = 20000;
  double prev = eval_poly(c, 0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double cur = eval_poly(c, x);
    if (prev == 0.0) roots.push_back(static_cast<double>(i - 1) / kGrid);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
      double lo = static_cast<double>(i - 1) / kGrid, hi = x;
      double flo = prev;
      for (int b = 0; b < 60; ++b) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval_poly(c, mid);
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  return roots;
}

}  // namespace

PTFit fit_logistic_pt(const std::vector<DoseOutcome>& raw, int degree) {
  if (degree < 1 || degree > 3) throw std::invalid_argument("degree must be in 1..3");
  // Fit on a canonical ordering so the result is insertion-order independent.
  std::vector<DoseOutcome> data = raw;
  std::sort(data.begin(), data.end(), [](const DoseOutcome& a, const DoseOutcome& b) {
    return std::tie(a.delta, a.success) < std::tie(b.delta, b.success);
  });
  std::set<double> distinct;
  bool any_success = false, any_failure = false;
  for (const auto& d : data) {
    distinct.insert(d.delta);
    (d.success ? any_success : any_failure) = true;
  }
  if (static_cast<int>(distinct.size()) < degree + 2) {
    throw std::invalid_argument("need at least degree+2 distinct delta values");
  }
  if (!any_success || !any_failure) throw std::runtime_error("no transition in band");

  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  Eigen::VectorXd y(n);
  const auto design = [&](int deg) {
    Eigen::MatrixXd X(n, deg + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = 1.0;
      for (int k = 0; k <= deg; ++k) {
        X(i, k) = v;
        v *= data[i].delta;
      }
      y[i] = data[i].success ? 1.0 : 0.0;
    }
    return X;
  };

  const Eigen::MatrixXd X1 = design(1);
  const Eigen::VectorXd beta1 = irls_logistic(X1, y);
  const double pt1 = -beta1[0] / beta1[1];

  PTFit fit;
  fit.degree = degree;
  fit.n_points = static_cast<int>(n);
  if (degree == 1) {
    fit.coefficients = beta1;
    fit.delta_pt = pt1;
    fit.out_of_range = !(pt1 > 0.0 && pt1 < 1.0);
  } else {
    const Eigen::MatrixXd X = design(degree);
    fit.coefficients = irls_logistic(X, y);
    const auto roots = poly_roots_01(fit.coefficients);
    if (roots.empty()) {
      fit.out_of_range = true;
      fit.delta_pt = pt1;  // fall back to the linear estimate for reporting
    } else {
      fit.delta_pt = *std::min_element(roots.begin(), roots.end(), [&](double a, double b) {
        return std::abs(a - pt1) < std::abs(b - pt1);
      });
    }
  }

  // Perfect separation: every observation fitted to its own outcome at the
  // clamp limits. The ridge keeps the fit finite and symmetric.
  const Eigen::MatrixXd Xd = design(degree);
  const Eigen::VectorXd eta = Xd * fit.coefficients;
  fit.separable = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-eta[i]));
    if (data[i].success ? p < 0.999 : p > 0.001) {
      fit.separable = false;
      break;
    }
  }
  return fit;
}

GroupedFit pt_curve(const std::vector<EpsilonDose>& records, int degree) {
  std::map<double, std::vector<DoseOutcome>> groups;
  for (const auto& r : records) groups[r.epsilon].push_back({r.delta, r.success});
  GroupedFit out;
  for (auto& [eps, data] : groups) {
    try {
      PTFit fit = fit_logistic_pt(data, degree);
      fit.epsilon = eps;
      out.fits.push_back(std::move(fit));
    } catch (const std::runtime_error&) {
      out.skipped_epsilons.push_back(eps);
    }
  }
  return out;
}

}  // namespace vcs
