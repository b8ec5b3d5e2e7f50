#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vcs/records.hpp"
#include "vcs/solvers.hpp"

namespace vcs {

/// Parameters of one experiment cell.
struct TrialSpec {
  std::string algo;  // steinsense | softsense | array-amp | group-bp
  int N = 0;
  int B = 1;
  double epsilon = 0.0;
  double delta = 0.0;
  NonzeroDistribution dist;
  // Threshold oracle for softsense / array-amp; defaults to the cell epsilon.
  std::optional<double> epsilon_for_tau;
  int max_iters = 300;
};

/// Pure function of (spec, seed): generates support, X, A (in that order from
/// one stream), runs the solver, scores the outcome. Solver divergence is
/// recorded, not thrown.
TrialRecord run_trial(const TrialSpec& spec, std::uint64_t seed);

struct DeltaBand {
  // Either per-epsilon explicit centers or the analytic minimax risk of the
  // algorithm's denoiser.
  std::optional<std::vector<double>> explicit_centers;
  double half_width = 0.1;
  double step = 0.02;
};

struct GridSpec {
  std::string algo;
  int N = 0;
  int B = 1;
  NonzeroDistribution dist;
  std::vector<double> epsilons;
  DeltaBand delta_band;
  int reps = 20;
  std::uint64_t base_seed = 0;
  std::optional<double> epsilon_for_tau;
  int max_iters = 300;

  /// Analytic band center for one epsilon (m_js or m_bst of the denoiser).
  double analytic_center(double epsilon) const;
  /// The delta grid for epsilon index ei, filtered to 1 <= round(N*delta) <= N.
  std::vector<double> deltas_for(int ei) const;
};

void to_json(nlohmann::json& j, const GridSpec& g);
void from_json(const nlohmann::json& j, GridSpec& g);

/// Deterministic per-cell seed: hash(base_seed, epsilon index, delta index, rep).
std::uint64_t trial_seed(std::uint64_t base_seed, int eps_idx, int delta_idx, int rep);

/// Runs every (epsilon x delta x rep) cell not already present in out_path,
/// appending NDJSON records as trials finish (single writer, flushed per
/// line). Returns the number of records written. Restartable: present
/// (epsilon, delta, rep) keys are skipped.
std::int64_t run_grid(const GridSpec& grid, int parallelism, const std::string& out_path);

struct HeatCell {
  double epsilon;
  double delta;
  double success_fraction;
  std::int64_t n_trials;
};

/// Exact group-by average of the success flag, sorted by (epsilon, delta);
/// insertion-order independent.
std::vector<HeatCell> heatmap(const std::vector<TrialRecord>& records);

}  // namespace vcs
