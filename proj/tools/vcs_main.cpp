#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "vcs/csv.hpp"
#include "vcs/harness.hpp"
#include "vcs/ld50.hpp"
#include "vcs/minimax_risk.hpp"
#include "vcs/signal_model.hpp"
#include "vcs/state_evolution.hpp"

namespace {

using nlohmann::json;

vcs::NonzeroDistribution parse_dist(const std::string& spec) {
  return json::parse(spec).get<vcs::NonzeroDistribution>();
}

vcs::DenoiserSpec parse_denoiser(const std::string& name, double epsilon, int B, double tau_flag) {
  if (name == "js") return vcs::DenoiserSpec::james_stein();
  if (name == "bst") {
    const double tau = tau_flag >= 0.0 ? tau_flag : vcs::tau_minimax(epsilon, B);
    return vcs::DenoiserSpec::block_soft(tau);
  }
  throw CLI::ValidationError("--denoiser must be bst or js");
}

int cmd_minimax(const std::string& denoiser, double epsilon, int B) {
  json out{{"denoiser", denoiser}, {"epsilon", epsilon}, {"B", B}};
  out["value"] = denoiser == "js" ? vcs::m_js(epsilon, B) : vcs::m_bst(epsilon, B);
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_se(const std::string& denoiser, const std::string& dist, double epsilon, double delta,
           int B, int iters, std::int64_t samples, std::uint64_t seed, bool matricial,
           double tau_flag) {
  vcs::SparsePrior prior{epsilon, parse_dist(dist), B};
  vcs::SEOptions opts;
  opts.iters = iters;
  opts.samples = samples;
  opts.seed = seed;
  const auto trace = vcs::se_run(prior, parse_denoiser(denoiser, epsilon, B, tau_flag), delta,
                                 matricial ? vcs::SEKind::matricial : vcs::SEKind::scalar, opts);
  json out{{"kind", matricial ? "matricial" : "scalar"},
           {"denoiser", denoiser},
           {"epsilon", epsilon},
           {"delta", delta},
           {"B", B},
           {"values", trace.values},
           {"stderrs", trace.stderrs},
           {"converged_to_zero", trace.converged_to_zero}};
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_trial(const std::string& algo, int N, int B, double epsilon, double delta,
              const std::string& dist, std::uint64_t seed, double eps_for_tau) {
  vcs::TrialSpec spec;
  spec.algo = algo;
  spec.N = N;
  spec.B = B;
  spec.epsilon = epsilon;
  spec.delta = delta;
  spec.dist = parse_dist(dist);
  if (eps_for_tau > 0.0) spec.epsilon_for_tau = eps_for_tau;
  std::cout << json(vcs::run_trial(spec, seed)).dump() << "\n";
  return 0;
}

int cmd_grid(const std::string& config_path, const std::string& out_path, int jobs) {
  std::ifstream f(config_path);
  if (!f) throw std::runtime_error("cannot open " + config_path);
  const auto grid = json::parse(f).get<vcs::GridSpec>();
  const auto written = vcs::run_grid(grid, jobs, out_path);
  std::cout << json{{"records_written", written}}.dump() << "\n";
  return 0;
}

int cmd_fit_pt(const std::string& in_path, int degree, const std::string& out_path) {
  std::vector<vcs::EpsilonDose> doses;
  for (const auto& r : vcs::read_ndjson_records(in_path)) {
    doses.push_back({r.epsilon, r.delta, r.success});
  }
  const auto fit = vcs::pt_curve(doses, degree);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << "epsilon,delta_pt,degree,n_points\n";
  out.precision(12);
  for (const auto& f : fit.fits) {
    out << f.epsilon << ',' << f.delta_pt << ',' << f.degree << ',' << f.n_points << "\n";
  }
  for (double eps : fit.skipped_epsilons) {
    std::cerr << "epsilon " << eps << ": no transition in band, skipped\n";
  }
  return 0;
}

int cmd_heatmap(const std::string& in_path, const std::string& out_path) {
  const auto cells = vcs::heatmap(vcs::read_ndjson_records(in_path));
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  out << "epsilon,delta,success_fraction,n_trials\n";
  out.precision(12);
  for (const auto& c : cells) {
    out << c.epsilon << ',' << c.delta << ',' << c.success_fraction << ',' << c.n_trials << "\n";
  }
  return 0;
}

int cmd_sparsify(const std::string& in_path, double epsilon, bool log2_flag,
                 const std::string& out_path) {
  const auto m = vcs::read_csv_matrix(in_path);
  const auto signal = vcs::ingest_sparsify(m, epsilon, log2_flag);
  vcs::write_csv_matrix(out_path, signal.X);
  std::cout << json{{"N", signal.X.rows()},
                    {"B", signal.X.cols()},
                    {"k", signal.support.size()},
                    {"epsilon", epsilon}}
                   .dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vector compressed sensing: solvers, risk theory, experiment harness"};
  app.require_subcommand(1);

  std::string denoiser = "js", dist = R"({"kind":"std_gaussian"})", algo = "steinsense";
  std::string in_path, out_path, config_path;
  double epsilon = 0.2, delta = 0.5, eps_for_tau = -1.0, tau_flag = -1.0;
  int B = 10, N = 500, iters = 200, degree = 1, jobs = 1;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  bool matricial = false, log2_flag = false;

  auto* minimax = app.add_subcommand("minimax", "analytic minimax risk of a denoiser");
  minimax->add_option("--denoiser", denoiser)->required()->check(CLI::IsMember({"bst", "js"}));
  minimax->add_option("--epsilon", epsilon)->required();
  minimax->add_option("--dim", B)->required();

  auto* se = app.add_subcommand("se", "state-evolution trace for one (epsilon, delta)");
  se->add_option("--denoiser", denoiser)->required()->check(CLI::IsMember({"bst", "js"}));
  se->add_option("--dist", dist)->required();
  se->add_option("--epsilon", epsilon)->required();
  se->add_option("--delta", delta)->required();
  se->add_option("--dim", B)->required();
  se->add_option("--iters", iters);
  se->add_option("--samples", samples);
  se->add_option("--seed", seed);
  se->add_option("--tau", tau_flag, "block-soft threshold; default minimax tau(epsilon,B)");
  se->add_flag("--matricial", matricial);

  auto* trial = app.add_subcommand("trial", "run one seeded reconstruction trial");
  trial->add_option("--algo", algo)
      ->required()
      ->check(CLI::IsMember({"steinsense", "softsense", "array-amp", "group-bp"}));
  trial->add_option("--N", N)->required();
  trial->add_option("--dim", B)->required();
  trial->add_option("--epsilon", epsilon)->required();
  trial->add_option("--delta", delta)->required();
  trial->add_option("--dist", dist)->required();
  trial->add_option("--seed", seed)->required();
  trial->add_option("--epsilon-for-tau", eps_for_tau);

  auto* grid = app.add_subcommand("grid", "run a resumable trial grid from a JSON config");
  grid->add_option("--config", config_path)->required();
  grid->add_option("--out", out_path)->required();
  grid->add_option("--jobs", jobs);

  auto* fit = app.add_subcommand("fit-pt", "LD50 phase-transition fit per epsilon");
  fit->add_option("--in", in_path)->required();
  fit->add_option("--degree", degree)->required()->check(CLI::Range(1, 3));
  fit->add_option("--out", out_path)->required();

  auto* heat = app.add_subcommand("heatmap", "success fraction per (epsilon, delta) cell");
  heat->add_option("--in", in_path)->required();
  heat->add_option("--out", out_path)->required();

  auto* sparsify = app.add_subcommand("sparsify", "top-fraction row sparsification of a CSV");
  sparsify->add_option("--in", in_path)->required();
  sparsify->add_option("--epsilon", epsilon)->required();
  sparsify->add_flag("--log2", log2_flag);
  sparsify->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (minimax->parsed()) return cmd_minimax(denoiser, epsilon, B);
    if (se->parsed())
      return cmd_se(denoiser, dist, epsilon, delta, B, iters, samples, seed, matricial, tau_flag);
    if (trial->parsed()) return cmd_trial(algo, N, B, epsilon, delta, dist, seed, eps_for_tau);
    if (grid->parsed()) return cmd_grid(config_path, out_path, jobs);
    if (fit->parsed()) return cmd_fit_pt(in_path, degree, out_path);
    if (heat->parsed()) return cmd_heatmap(in_path, out_path);
    if (sparsify->parsed()) return cmd_sparsify(in_path, epsilon, log2_flag, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
