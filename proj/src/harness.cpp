#include "vcs/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "vcs/minimax_risk.hpp"
#include "vcs/signal_model.hpp"

namespace vcs {

namespace {

int round_count(double x) { return static_cast<int>(std::lround(x)); }

}  // namespace

TrialRecord run_trial(const TrialSpec& spec, std::uint64_t seed) {
  TrialRecord rec;
  rec.algo = spec.algo;
  rec.N = spec.N;
  rec.B = spec.B;
  rec.epsilon = spec.epsilon;
  rec.delta = spec.delta;
  rec.dist = spec.dist;
  rec.seed = seed;

  Rng rng(seed);
  const SignalEnsemble sig = gen_signal(spec.N, spec.B, spec.epsilon, spec.dist, rng);
  SolveOptions opts;
  opts.max_iters = spec.max_iters;
  const double eps_tau = spec.epsilon_for_tau.value_or(spec.epsilon);

  const auto started = std::chrono::steady_clock::now();
  try {
    SolveResult res;
    if (spec.algo == "array-amp") {
      const int n_arr = round_count(spec.delta * spec.N * spec.B);
      rec.n = n_arr;
      const Eigen::MatrixXd A = gen_measurement(spec.N * spec.B, n_arr, rng);
      Eigen::VectorXd x_arr(spec.N * spec.B);
      for (int i = 0; i < spec.N; ++i) {
        x_arr.segment(static_cast<Eigen::Index>(i) * spec.B, spec.B) = sig.X.row(i).transpose();
      }
      const Eigen::VectorXd y_arr = A * x_arr;
      res = array_amp(A, y_arr, DenoiserSpec::block_soft(tau_minimax(eps_tau, spec.B)), spec.B,
                      opts);
    } else {
      const int n = round_count(spec.delta * spec.N);
      rec.n = n;
      const Eigen::MatrixXd A = gen_measurement(spec.N, n, rng);
      const Eigen::MatrixXd Y = A * sig.X;
      if (spec.algo == "steinsense") {
        res = steinsense(A, Y, opts);
      } else if (spec.algo == "softsense") {
        res = softsense(A, Y, eps_tau, opts);
      } else if (spec.algo == "group-bp") {
        AdmmOptions admm;
        admm.max_iters = std::max(spec.max_iters, 5000);
        res = group_bp_admm(A, Y, admm);
      } else {
        throw std::invalid_argument("unknown algorithm: " + spec.algo);
      }
    }
    const ErrorResult err = relative_error(res.xhat, sig.X);
    rec.rel_error = err.err;
    rec.success = err.success;
    rec.iters = res.iters;
    rec.converged = res.converged;
  } catch (const DivergedError& e) {
    rec.diverged = true;
    rec.rel_error.reset();
    rec.success = false;
    rec.iters = e.iteration + 1;
    rec.converged = false;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          started)
                    .count();
  return rec;
}

double GridSpec::analytic_center(double epsilon) const {
  if (algo == "steinsense") return m_js(epsilon, B);
  return m_bst(epsilon, B);  // softsense, group-bp, array-amp
}

std::vector<double> GridSpec::deltas_for(int ei) const {
  const double center = delta_band.explicit_centers
                            ? delta_band.explicit_centers->at(ei)
                            : analytic_center(epsilons.at(ei));
  const double hw = delta_band.half_width;
  const double step = delta_band.step;
  if (!(step > 0.0)) throw std::invalid_argument("delta step must be positive");
  const int count = 2 * static_cast<int>(std::round(hw / step)) + 1;
  std::vector<double> out;
  const int scale = (algo == "array-amp") ? N * B : N;
  for (int j = 0; j < count; ++j) {
    const double d = center - hw + j * step;
    if (!(d > 0.0 && d <= 1.0)) continue;
    const int n = round_count(d * scale);
    if (n < 1 || n > scale) continue;
    out.push_back(d);
  }
  return out;
}

void to_json(nlohmann::json& j, const GridSpec& g) {
  j = nlohmann::json{{"algo", g.algo},       {"N", g.N},
                     {"B", g.B},             {"dist", g.dist},
                     {"epsilons", g.epsilons}, {"reps", g.reps},
                     {"base_seed", g.base_seed}, {"max_iters", g.max_iters}};
  nlohmann::json band;
  if (g.delta_band.explicit_centers) {
    band["center"] = *g.delta_band.explicit_centers;
  } else {
    band["center"] = "analytic";
  }
  band["half_width"] = g.delta_band.half_width;
  band["step"] = g.delta_band.step;
  j["delta_band"] = band;
  if (g.epsilon_for_tau) j["epsilon_for_tau"] = *g.epsilon_for_tau;
}

void from_json(const nlohmann::json& j, GridSpec& g) {
  j.at("algo").get_to(g.algo);
  j.at("N").get_to(g.N);
  j.at("B").get_to(g.B);
  j.at("dist").get_to(g.dist);
  j.at("epsilons").get_to(g.epsilons);
  j.at("reps").get_to(g.reps);
  j.at("base_seed").get_to(g.base_seed);
  g.max_iters = j.value("max_iters", 300);
  const auto& band = j.at("delta_band");
  if (band.at("center").is_string()) {
    if (band.at("center").get<std::string>() != "analytic") {
      throw std::invalid_argument("delta_band.center must be \"analytic\" or a list");
    }
    g.delta_band.explicit_centers.reset();
  } else {
    g.delta_band.explicit_centers = band.at("center").get<std::vector<double>>();
  }
  g.delta_band.half_width = band.value("half_width", 0.1);
  g.delta_band.step = band.value("step", 0.02);
  if (j.contains("epsilon_for_tau")) g.epsilon_for_tau = j.at("epsilon_for_tau").get<double>();
  if (g.reps < 1) throw std::invalid_argument("reps must be >= 1");
}

std::uint64_t trial_seed(std::uint64_t base_seed, int eps_idx, int delta_idx, int rep) {
  return hash_combine(
      hash_combine(hash_combine(base_seed, static_cast<std::uint64_t>(eps_idx)),
                   static_cast<std::uint64_t>(delta_idx)),
      static_cast<std::uint64_t>(rep));
}

std::int64_t run_grid(const GridSpec& grid, int parallelism, const std::string& out_path) {
  // Resume: collect (epsilon, delta, rep) keys already on disk.
  std::set<std::tuple<double, double, int>> done;
  {
    std::ifstream existing(out_path);
    if (existing) {
      for (const auto& r : read_ndjson_records(existing)) {
        done.insert({r.epsilon, r.delta, r.rep});
      }
    }
  }

  struct WorkItem {
    int eps_idx, delta_idx, rep;
    double epsilon, delta;
  };
  std::vector<WorkItem> work;
  for (int ei = 0; ei < static_cast<int>(grid.epsilons.size()); ++ei) {
    const auto deltas = grid.deltas_for(ei);
    for (int di = 0; di < static_cast<int>(deltas.size()); ++di) {
      for (int rep = 0; rep < grid.reps; ++rep) {
        if (done.count({grid.epsilons[ei], deltas[di], rep})) continue;
        work.push_back({ei, di, rep, grid.epsilons[ei], deltas[di]});
      }
    }
  }

  std::ofstream out(out_path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for append");

  std::int64_t written = 0;
  const int jobs = std::max(1, parallelism);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::int64_t w = 0; w < static_cast<std::int64_t>(work.size()); ++w) {
    const WorkItem& item = work[w];
    TrialSpec spec;
    spec.algo = grid.algo;
    spec.N = grid.N;
    spec.B = grid.B;
    spec.epsilon = item.epsilon;
    spec.delta = item.delta;
    spec.dist = grid.dist;
    spec.epsilon_for_tau = grid.epsilon_for_tau;
    spec.max_iters = grid.max_iters;
    TrialRecord rec =
        run_trial(spec, trial_seed(grid.base_seed, item.eps_idx, item.delta_idx, item.rep));
    rec.rep = item.rep;
    const std::string line = nlohmann::json(rec).dump();
#pragma omp critical(vcs_grid_writer)
    {
      out << line << '\n';
      out.flush();
      ++written;
    }
  }
  return written;
}

std::vector<HeatCell> heatmap(const std::vector<TrialRecord>& records) {
  std::map<std::pair<double, double>, std::pair<std::int64_t, std::int64_t>> cells;
  for (const auto& r : records) {
    auto& [succ, total] = cells[{r.epsilon, r.delta}];
    succ += r.success ? 1 : 0;
    ++total;
  }
  std::vector<HeatCell> out;
  out.reserve(cells.size());
  for (const auto& [key, counts] : cells) {
    out.push_back({key.first, key.second,
                   static_cast<double>(counts.first) / static_cast<double>(counts.second),
                   counts.second});
  }
  return out;
}

}  // namespace vcs
