#pragma once

namespace vcs {

struct HG {
  double h;
  double g;
};

/// h(tau^2,B) = tau / E[(sqrt(chi2_B)-tau)_+] and
/// g(tau^2,B) = tau E[(sqrt(chi2_B)-tau)^2_+] / E[(sqrt(chi2_B)-tau)_+],
/// with the partial moments expressed through regularized upper incomplete
/// gamma tails (stable for B in the hundreds). Throws "threshold out of
/// range" when the denominator underflows.
HG h_g(double tau_sq, int B);

/// The tau solving 1/(1+h(tau^2,B)) = epsilon; bisection depth 60.
double tau_minimax(double epsilon, int B);

/// Minimax risk of block soft thresholding:
/// (B + tau^2 + g) / (B (1 + h)) at tau = tau_minimax(epsilon, B).
double m_bst(double epsilon, int B);

/// (1/B) E||eta_JS(z)||^2 at z ~ N(0, I_B), by adaptive quadrature over the
/// chi^2_B density; B >= 3.
double r_js_zero(int B);

/// Minimax risk of James-Stein: (1-epsilon) r_js_zero(B) + epsilon.
double m_js(double epsilon, int B);

/// Bayes-risk lower bound on the global minimax risk from the two-point
/// prior with a^2 = lambda^2 - 2 lambda^{3/2}, lambda = sqrt(2 log((1-e)/e)).
/// Requires a^2 > 0, i.e. epsilon < 1/(1+e^8); throws otherwise.
double bayes_two_point_bound(double epsilon, int B);

struct SparsityAsymptotics {
  double tau_approx;    // sqrt(2 log(1/epsilon))
  double m_bst_approx;  // 2 epsilon log(1/epsilon) / B
};

/// Extreme-sparsity reference values for diagnostics.
SparsityAsymptotics extreme_sparsity_asymptotics(double epsilon, int B);

}  // namespace vcs
