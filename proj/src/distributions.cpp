#include "vcs/distributions.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vcs {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string("distribution parameter must be positive: ") + what);
  }
}

}  // namespace

double ScalarDist::sample(Rng& rng) const {
  switch (kind) {
    case Kind::std_gaussian:
      return rng.normal();
    case Kind::gaussian:
      return param * rng.normal();
    case Kind::abs_gaussian:
      return std::abs(rng.normal());
    case Kind::exponential:
      return rng.exponential(param);
    case Kind::binary_signed:
      return rng.uniform() < 0.5 ? -param : param;
    case Kind::ternary_zero_signed: {
      const double u = rng.uniform() * 3.0;
      if (u < 1.0) return -param;
      if (u < 2.0) return 0.0;
      return param;
    }
    case Kind::laplace: {
      const double u = rng.uniform() - 0.5;
      return -param * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }
    case Kind::logistic: {
      const double u = rng.uniform_pos();
      return param * std::log(u / (1.0 - u + 1e-320));
    }
    case Kind::student_t: {
      const double z = rng.normal();
      return z / std::sqrt(rng.chi_squared(param) / param);
    }
    case Kind::triangular:
      return param * (rng.uniform() + rng.uniform() - 1.0);
    case Kind::poisson:
      return static_cast<double>(rng.poisson(param));
  }
  throw std::logic_error("unreachable scalar kind");
}

double ScalarDist::mean() const {
  switch (kind) {
    case Kind::abs_gaussian:
      return std::sqrt(2.0 / kPi);
    case Kind::exponential:
      return 1.0 / param;
    case Kind::poisson:
      return param;
    default:
      return 0.0;  // remaining families are symmetric about zero
  }
}

double ScalarDist::second_moment() const {
  switch (kind) {
    case Kind::std_gaussian:
    case Kind::abs_gaussian:
      return 1.0;
    case Kind::gaussian:
      return param * param;
    case Kind::exponential:
      return 2.0 / (param * param);
    case Kind::binary_signed:
      return param * param;
    case Kind::ternary_zero_signed:
      return 2.0 * param * param / 3.0;
    case Kind::laplace:
      return 2.0 * param * param;
    case Kind::logistic:
      return kPi * kPi * param * param / 3.0;
    case Kind::student_t:
      if (param <= 2.0) throw std::invalid_argument("student_t second moment needs dof > 2");
      return param / (param - 2.0);
    case Kind::triangular:
      return param * param / 6.0;
    case Kind::poisson:
      return param + param * param;
  }
  throw std::logic_error("unreachable scalar kind");
}

NonzeroDistribution NonzeroDistribution::std_gaussian() {
  return {};
}

NonzeroDistribution NonzeroDistribution::abs_gaussian() {
  NonzeroDistribution d;
  d.kind = Kind::abs_gaussian;
  return d;
}

NonzeroDistribution NonzeroDistribution::exponential(double rate) {
  require_positive(rate, "exponential rate");
  NonzeroDistribution d;
  d.kind = Kind::exponential;
  d.param = rate;
  return d;
}

NonzeroDistribution NonzeroDistribution::poisson_hetero(std::vector<double> rates) {
  for (double r : rates) require_positive(r, "poisson rate");
  if (rates.empty()) throw std::invalid_argument("poisson_hetero needs at least one rate");
  NonzeroDistribution d;
  d.kind = Kind::poisson_hetero;
  d.rates = std::move(rates);
  return d;
}

NonzeroDistribution NonzeroDistribution::binary_signed(double magnitude) {
  NonzeroDistribution d;
  d.kind = Kind::binary_signed;
  d.param = magnitude;
  return d;
}

NonzeroDistribution NonzeroDistribution::ternary_zero_signed(double magnitude) {
  NonzeroDistribution d;
  d.kind = Kind::ternary_zero_signed;
  d.param = magnitude;
  return d;
}

NonzeroDistribution NonzeroDistribution::per_column_mix(std::vector<ScalarDist> columns) {
  if (columns.empty()) throw std::invalid_argument("per_column_mix needs at least one column");
  NonzeroDistribution d;
  d.kind = Kind::per_column_mix;
  d.columns = std::move(columns);
  return d;
}

NonzeroDistribution NonzeroDistribution::sphere_shell(double radius) {
  require_positive(radius, "sphere_shell radius");
  NonzeroDistribution d;
  d.kind = Kind::sphere_shell;
  d.param = radius;
  return d;
}

bool NonzeroDistribution::column_indexed() const {
  if (kind == Kind::poisson_hetero || kind == Kind::per_column_mix) return true;
  if (kind == Kind::symmetrized) return inner->column_indexed();
  return false;
}

int NonzeroDistribution::implied_columns() const {
  switch (kind) {
    case Kind::poisson_hetero:
      return static_cast<int>(rates.size());
    case Kind::per_column_mix:
      return static_cast<int>(columns.size());
    case Kind::symmetrized:
      return inner->implied_columns();
    default:
      return 0;
  }
}

void NonzeroDistribution::validate(int B) const {
  if (B < 1) throw std::invalid_argument("B must be >= 1");
  switch (kind) {
    case Kind::exponential:
      require_positive(param, "exponential rate");
      break;
    case Kind::sphere_shell:
      require_positive(param, "sphere_shell radius");
      break;
    case Kind::poisson_hetero:
      for (double r : rates) require_positive(r, "poisson rate");
      break;
    case Kind::symmetrized:
      inner->validate(B);
      break;
    default:
      break;
  }
  if (column_indexed() && implied_columns() != B) {
    throw std::invalid_argument("column-indexed distribution implies B=" +
                                std::to_string(implied_columns()) + ", got B=" + std::to_string(B));
  }
}

Eigen::VectorXd NonzeroDistribution::sample_row(int B, Rng& rng) const {
  Eigen::VectorXd x(B);
  switch (kind) {
    case Kind::std_gaussian:
      for (int j = 0; j < B; ++j) x[j] = rng.normal();
      return x;
    case Kind::abs_gaussian:
      for (int j = 0; j < B; ++j) x[j] = std::abs(rng.normal());
      return x;
    case Kind::exponential:
      for (int j = 0; j < B; ++j) x[j] = rng.exponential(param);
      return x;
    case Kind::poisson_hetero:
      for (int j = 0; j < B; ++j) x[j] = static_cast<double>(rng.poisson(rates[j]));
      return x;
    case Kind::binary_signed:
      for (int j = 0; j < B; ++j) x[j] = rng.uniform() < 0.5 ? -param : param;
      return x;
    case Kind::ternary_zero_signed: {
      ScalarDist s{ScalarDist::Kind::ternary_zero_signed, param};
      for (int j = 0; j < B; ++j) x[j] = s.sample(rng);
      return x;
    }
    case Kind::per_column_mix:
      for (int j = 0; j < B; ++j) x[j] = columns[j].sample(rng);
      return x;
    case Kind::sphere_shell: {
      double n2;
      do {
        for (int j = 0; j < B; ++j) x[j] = rng.normal();
        n2 = x.squaredNorm();
      } while (n2 == 0.0);
      return x * (param / std::sqrt(n2));
    }
    case Kind::symmetrized: {
      x = inner->sample_row(B, rng);
      for (int j = 0; j < B; ++j) {
        if (rng.uniform() < 0.5) x[j] = -x[j];
      }
      // Fisher-Yates with draws from the same stream.
      for (int j = B - 1; j > 0; --j) {
        const int k = static_cast<int>(rng.uniform() * (j + 1));  // uniform() < 1 so k <= j
        std::swap(x[j], x[k]);
      }
      return x;
    }
  }
  throw std::logic_error("unreachable distribution kind");
}

Eigen::VectorXd NonzeroDistribution::mean_vector(int B) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(B);
  switch (kind) {
    case Kind::abs_gaussian:
      m.setConstant(std::sqrt(2.0 / kPi));
      return m;
    case Kind::exponential:
      m.setConstant(1.0 / param);
      return m;
    case Kind::poisson_hetero:
      for (int j = 0; j < B; ++j) m[j] = rates[j];
      return m;
    case Kind::per_column_mix:
      for (int j = 0; j < B; ++j) m[j] = columns[j].mean();
      return m;
    default:
      return m;  // symmetric families and sphere_shell have mean zero
  }
}

Eigen::MatrixXd NonzeroDistribution::second_moment_matrix(int B) const {
  validate(B);
  switch (kind) {
    case Kind::sphere_shell:
      return (param * param / B) * Eigen::MatrixXd::Identity(B, B);
    case Kind::symmetrized: {
      const double tr = inner->second_moment_matrix(B).trace();
      return (tr / B) * Eigen::MatrixXd::Identity(B, B);
    }
    default: {
      // Independent coordinates: off-diagonals are products of means.
      const Eigen::VectorXd m1 = mean_vector(B);
      Eigen::VectorXd m2(B);
      switch (kind) {
        case Kind::std_gaussian:
        case Kind::abs_gaussian:
          m2.setConstant(1.0);
          break;
        case Kind::exponential:
          m2.setConstant(2.0 / (param * param));
          break;
        case Kind::poisson_hetero:
          for (int j = 0; j < B; ++j) m2[j] = rates[j] + rates[j] * rates[j];
          break;
        case Kind::binary_signed:
          m2.setConstant(param * param);
          break;
        case Kind::ternary_zero_signed:
          m2.setConstant(2.0 * param * param / 3.0);
          break;
        case Kind::per_column_mix:
          for (int j = 0; j < B; ++j) m2[j] = columns[j].second_moment();
          break;
        default:
          throw std::logic_error("unreachable");
      }
      Eigen::MatrixXd M = m1 * m1.transpose();
      M.diagonal() = m2;
      return M;
    }
  }
}

double NonzeroDistribution::second_moment_total(int B) const {
  return second_moment_matrix(B).trace();
}

std::string NonzeroDistribution::describe() const {
  nlohmann::json j;
  to_json(j, *this);
  return j.dump();
}

NonzeroDistribution symmetrize_sampler(const NonzeroDistribution& nonzero) {
  NonzeroDistribution d;
  d.kind = NonzeroDistribution::Kind::symmetrized;
  d.inner = std::make_shared<NonzeroDistribution>(nonzero);
  return d;
}

namespace {

const char* scalar_kind_name(ScalarDist::Kind k) {
  switch (k) {
    case ScalarDist::Kind::std_gaussian: return "std_gaussian";
    case ScalarDist::Kind::gaussian: return "gaussian";
    case ScalarDist::Kind::abs_gaussian: return "abs_gaussian";
    case ScalarDist::Kind::exponential: return "exponential";
    case ScalarDist::Kind::binary_signed: return "binary_signed";
    case ScalarDist::Kind::ternary_zero_signed: return "ternary_zero_signed";
    case ScalarDist::Kind::laplace: return "laplace";
    case ScalarDist::Kind::logistic: return "logistic";
    case ScalarDist::Kind::student_t: return "student_t";
    case ScalarDist::Kind::triangular: return "triangular";
    case ScalarDist::Kind::poisson: return "poisson";
  }
  return "unknown";
}

const char* scalar_param_name(ScalarDist::Kind k) {
  switch (k) {
    case ScalarDist::Kind::gaussian: return "sigma";
    case ScalarDist::Kind::exponential: return "rate";
    case ScalarDist::Kind::binary_signed: return "magnitude";
    case ScalarDist::Kind::ternary_zero_signed: return "magnitude";
    case ScalarDist::Kind::laplace: return "scale";
    case ScalarDist::Kind::logistic: return "scale";
    case ScalarDist::Kind::student_t: return "dof";
    case ScalarDist::Kind::triangular: return "half_width";
    case ScalarDist::Kind::poisson: return "rate";
    default: return nullptr;
  }
}

}  // namespace

void to_json(nlohmann::json& j, const ScalarDist& d) {
  j = nlohmann::json{{"kind", scalar_kind_name(d.kind)}};
  if (const char* p = scalar_param_name(d.kind)) j[p] = d.param;
}

void from_json(const nlohmann::json& j, ScalarDist& d) {
  const std::string kind = j.at("kind").get<std::string>();
  using K = ScalarDist::Kind;
  for (K k : {K::std_gaussian, K::gaussian, K::abs_gaussian, K::exponential, K::binary_signed,
              K::ternary_zero_signed, K::laplace, K::logistic, K::student_t, K::triangular,
              K::poisson}) {
    if (kind == scalar_kind_name(k)) {
      d.kind = k;
      if (const char* p = scalar_param_name(k)) d.param = j.at(p).get<double>();
      return;
    }
  }
  throw std::invalid_argument("unknown scalar distribution kind: " + kind);
}

void to_json(nlohmann::json& j, const NonzeroDistribution& d) {
  using K = NonzeroDistribution::Kind;
  switch (d.kind) {
    case K::std_gaussian: j = {{"kind", "std_gaussian"}}; return;
    case K::abs_gaussian: j = {{"kind", "abs_gaussian"}}; return;
    case K::exponential: j = {{"kind", "exponential"}, {"rate", d.param}}; return;
    case K::poisson_hetero: j = {{"kind", "poisson_hetero"}, {"rates", d.rates}}; return;
    case K::binary_signed: j = {{"kind", "binary_signed"}, {"magnitude", d.param}}; return;
    case K::ternary_zero_signed:
      j = {{"kind", "ternary_zero_signed"}, {"magnitude", d.param}};
      return;
    case K::per_column_mix: j = {{"kind", "per_column_mix"}, {"columns", d.columns}}; return;
    case K::sphere_shell: j = {{"kind", "sphere_shell"}, {"radius", d.param}}; return;
    case K::symmetrized: j = {{"kind", "symmetrized"}, {"inner", *d.inner}}; return;
  }
}

void from_json(const nlohmann::json& j, NonzeroDistribution& d) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "std_gaussian") {
    d = NonzeroDistribution::std_gaussian();
  } else if (kind == "abs_gaussian") {
    d = NonzeroDistribution::abs_gaussian();
  } else if (kind == "exponential") {
    d = NonzeroDistribution::exponential(j.at("rate").get<double>());
  } else if (kind == "poisson_hetero") {
    d = NonzeroDistribution::poisson_hetero(j.at("rates").get<std::vector<double>>());
  } else if (kind == "binary_signed") {
    d = NonzeroDistribution::binary_signed(j.at("magnitude").get<double>());
  } else if (kind == "ternary_zero_signed") {
    d = NonzeroDistribution::ternary_zero_signed(j.at("magnitude").get<double>());
  } else if (kind == "per_column_mix") {
    d = NonzeroDistribution::per_column_mix(j.at("columns").get<std::vector<ScalarDist>>());
  } else if (kind == "sphere_shell") {
    d = NonzeroDistribution::sphere_shell(j.at("radius").get<double>());
  } else if (kind == "symmetrized") {
    d = symmetrize_sampler(j.at("inner").get<NonzeroDistribution>());
  } else {
    throw std::invalid_argument("unknown distribution kind: " + kind);
  }
}

}  // namespace vcs
