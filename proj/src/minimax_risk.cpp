#include "vcs/minimax_risk.hpp"

#include <cmath>
#include <stdexcept>

#include "vcs/special_functions.hpp"

namespace vcs {

namespace {

// E[sqrt(chi2_B) 1{chi2_B > tau^2}] = sqrt(2) Gamma((B+1)/2)/Gamma(B/2) Q((B+1)/2, tau^2/2)
double sqrt_tail_moment(int B, double tau) {
  const double ratio = std::exp(std::lgamma((B + 1) / 2.0) - std::lgamma(B / 2.0));
  return std::sqrt(2.0) * ratio * gamma_q((B + 1) / 2.0, tau * tau / 2.0);
}

// E[(sqrt(chi2_B) - tau)_+]
double pos_part_moment1(int B, double tau) {
  return sqrt_tail_moment(B, tau) - tau * chi_squared_tail(B, tau * tau);
}

// E[(sqrt(chi2_B) - tau)^2_+]
double pos_part_moment2(int B, double tau) {
  const double x_tail = B * gamma_q(B / 2.0 + 1.0, tau * tau / 2.0);  // E[chi2 1{tail}]
  return x_tail - 2.0 * tau * sqrt_tail_moment(B, tau) +
         tau * tau * chi_squared_tail(B, tau * tau);
}

}  // namespace

HG h_g(double tau_sq, int B) {
  if (!(tau_sq > 0.0)) throw std::invalid_argument("tau_sq must be positive");
  if (B < 1) throw std::invalid_argument("B must be >= 1");
  const double tau = std::sqrt(tau_sq);
  const double den = pos_part_moment1(B, tau);
  if (!(den > 1e-300) || !std::isfinite(den)) {
    throw std::domain_error("threshold out of range: E[(sqrt(chi2)-tau)_+] underflows");
  }
  return {tau / den, tau * pos_part_moment2(B, tau) / den};
}

double tau_minimax(double epsilon, int B) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
  // 1/(1+h(t^2)) is decreasing in t; bracket then bisect.
  const auto f = [&](double t) { return 1.0 / (1.0 + h_g(t * t, B).h) - epsilon; };
  double lo = 1e-8;
  double hi = 1.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) throw std::domain_error("threshold out of range: epsilon too small");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double m_bst(double epsilon, int B) {
  const double tau = tau_minimax(epsilon, B);
  const HG hg = h_g(tau * tau, B);
  return (B + tau * tau + hg.g) / (B * (1.0 + hg.h));
}

double r_js_zero(int B) {
  if (B < 3) throw std::invalid_argument("James-Stein requires B >= 3");
  const double c = static_cast<double>(B - 2);
  // Integrand (1 - c/x)^2 x f_B(x) over x > c; the tail beyond the window is
  // below 1e-30 of the total for every B of interest.
  const double upper = B + 60.0 + 16.0 * std::sqrt(2.0 * B);
  const auto f = [&](double x) {
    const double s = 1.0 - c / x;
    return s * s * x * chi_squared_pdf(B, x);
  };
  return integrate_gk(f, c, upper, 1e-10) / B;
}

double m_js(double epsilon, int B) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must be in [0,1]");
  }
  return (1.0 - epsilon) * r_js_zero(B) + epsilon;
}

double bayes_two_point_bound(double epsilon, int B) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
  const double lam = std::sqrt(2.0 * std::log((1.0 - epsilon) / epsilon));
  const double a2 = lam * lam - 2.0 * std::pow(lam, 1.5);
  if (!(a2 > 0.0)) {
    throw std::domain_error("epsilon too large for the bound (a^2 <= 0)");
  }
  const double a = std::sqrt(a2);
  const double shift = std::pow(lam, 1.5);
  const auto f = [&](double z) {
    const double arg = a * z - shift;
    double t;
    if (arg > 300.0) {
      t = 0.0;
    } else if (arg < -300.0) {
      t = 1.0;
    } else {
      const double e = std::exp(arg);
      t = 1.0 / ((1.0 + e) * (1.0 + e));
    }
    return t * std::exp(-z * z / 2.0) / std::sqrt(2.0 * 3.14159265358979323846);
  };
  return (epsilon * a2 / B) * integrate_gk(f, -12.0, 12.0, 1e-10);
}

SparsityAsymptotics extreme_sparsity_asymptotics(double epsilon, int B) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must be in (0,0.5)");
  const double l = std::log(1.0 / epsilon);
  return {std::sqrt(2.0 * l), 2.0 * epsilon * l / B};
}

}  // namespace vcs
