#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcs/rng.hpp"

namespace vcs {

// Scalar families usable inside PerColumnMix columns.
struct ScalarDist {
  enum class Kind {
    std_gaussian,
    gaussian,       // N(0, sigma^2)
    abs_gaussian,   // |N(0,1)|
    exponential,    // rate lambda
    binary_signed,  // +/- magnitude with equal probability
    ternary_zero_signed,  // {-m, 0, +m} with equal probability
    laplace,        // scale b
    logistic,       // scale s
    student_t,      // dof nu
    triangular,     // symmetric on [-c, c] with mode 0
    poisson,        // rate lambda
  };

  Kind kind = Kind::std_gaussian;
  double param = 0.0;

  double sample(Rng& rng) const;
  double mean() const;
  double second_moment() const;  // throws when infinite (student_t dof <= 2)
};

// Distribution of a nonzero B-dimensional signal row. Tagged choice; the
// symmetrized wrapper realizes the sign-and-permutation mixture by
// randomization (an exact sampler, not an enumeration over 2^B * B! terms).
struct NonzeroDistribution {
  enum class Kind {
    std_gaussian,
    abs_gaussian,
    exponential,
    poisson_hetero,
    binary_signed,
    ternary_zero_signed,
    per_column_mix,
    sphere_shell,
    symmetrized,
  };

  Kind kind = Kind::std_gaussian;
  double param = 0.0;                    // rate / magnitude / radius
  std::vector<double> rates;             // poisson_hetero
  std::vector<ScalarDist> columns;       // per_column_mix
  std::shared_ptr<NonzeroDistribution> inner;  // symmetrized

  static NonzeroDistribution std_gaussian();
  static NonzeroDistribution abs_gaussian();
  static NonzeroDistribution exponential(double rate);
  static NonzeroDistribution poisson_hetero(std::vector<double> rates);
  static NonzeroDistribution binary_signed(double magnitude);
  static NonzeroDistribution ternary_zero_signed(double magnitude);
  static NonzeroDistribution per_column_mix(std::vector<ScalarDist> columns);
  static NonzeroDistribution sphere_shell(double radius);

  // True when the descriptor fixes the column count (poisson_hetero, mix).
  bool column_indexed() const;
  int implied_columns() const;  // 0 when not column_indexed

  void validate(int B) const;  // parameter positivity, column count == B

  Eigen::VectorXd sample_row(int B, Rng& rng) const;

  // E x and E x x^T of a nonzero row; closed form for every supported family.
  Eigen::VectorXd mean_vector(int B) const;
  Eigen::MatrixXd second_moment_matrix(int B) const;
  double second_moment_total(int B) const;  // E ||x||^2

  std::string describe() const;
};

// Wraps a sampler with an independent uniform sign per coordinate and an
// independent uniform permutation, producing a symmetric exchangeable law
// with the same risk under norm-driven denoisers.
NonzeroDistribution symmetrize_sampler(const NonzeroDistribution& nonzero);

void to_json(nlohmann::json& j, const ScalarDist& d);
void from_json(const nlohmann::json& j, ScalarDist& d);
void to_json(nlohmann::json& j, const NonzeroDistribution& d);
void from_json(const nlohmann::json& j, NonzeroDistribution& d);

}  // namespace vcs
