#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vcs {

struct DoseOutcome {
  double delta;
  bool success;
};

struct PTFit {
  double epsilon = 0.0;
  int degree = 1;
  Eigen::VectorXd coefficients;  // beta_0 .. beta_degree
  double delta_pt = 0.0;
  int n_points = 0;
  bool separable = false;
  bool out_of_range = false;  // no usable root in (0,1)
};

/// Polynomial-logistic fit of success probability against delta by ridge-
/// stabilized IRLS (ridge 1e-8, 100 iterations max, tolerance 1e-10).
/// delta_pt is -b0/b1 at degree 1; at higher degree, the real root of the
/// fitted polynomial on [0,1] nearest the degree-1 estimate. Throws
/// "no transition in band" when all outcomes agree; requires at least
/// degree+2 distinct delta values.
PTFit fit_logistic_pt(const std::vector<DoseOutcome>& data, int degree);

struct GroupedFit {
  std::vector<PTFit> fits;                 // one per epsilon with a transition
  std::vector<double> skipped_epsilons;    // groups with no transition in band
};

struct EpsilonDose {
  double epsilon;
  double delta;
  bool success;
};

/// Groups by epsilon and fits each group, collecting the groups that error
/// with "no transition in band" instead of failing.
GroupedFit pt_curve(const std::vector<EpsilonDose>& records, int degree);

}  // namespace vcs
