// Command-line driver: swlab <experiment> --config <path> [overrides].
//
// Exit codes: 0 run passed its acceptance thresholds, 1 run completed but
// failed a threshold, 2 input error (bad flag, config, or parameter domain),
// 3 internal error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "swlab/harness/config.hpp"
#include "swlab/harness/experiments.hpp"

namespace {

void print_summary(const swlab::harness::RunSummary& s) {
  const auto& cfg = s.config;
  std::printf("experiment     %s\n", swlab::harness::experiment_name(cfg.experiment));
  std::printf("regime         %s\n", s.regime.c_str());
  std::printf("opt            %.6f\n", s.opt);
  if (!s.records.empty()) {
    std::printf("trials         %zu\n", s.records.size());
    std::printf("pass_fraction  %.3f (required %.3f)\n", s.pass_fraction,
                cfg.pass_fraction_required);
    std::printf("deviation      p10 %.6f  p50 %.6f  p90 %.6f\n", s.p10, s.p50, s.p90);
  }
  if (!s.regimes_witnessed.empty()) {
    std::printf("regimes        ");
    for (std::size_t i = 0; i < s.regimes_witnessed.size(); ++i)
      std::printf("%s%s", i ? ", " : "", s.regimes_witnessed[i].c_str());
    std::printf("\n");
  }
  std::printf("wall_ms        %.1f\n", s.wall_ms);
  std::printf("summary        %s/%s_summary.json\n", cfg.output_dir.c_str(),
              swlab::harness::experiment_name(cfg.experiment));
  std::printf("result         %s\n", s.pass ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swlab: sampling, message passing, and scalar theory for spiked matrices"};
  app.get_formatter()->column_width(28);

  std::string experiment;
  std::string config_path;
  std::string seed;
  std::string out_dir;
  std::string trials;
  std::string n;
  std::string beta;
  std::string beta_grid;
  std::string lambda;

  app.add_option("experiment", experiment,
                 "one of: fixed_point, phase_diagram, glauber, rgd, prgd, amp, compare, "
                 "magnetization, curie_weiss, overlap_probe")
      ->required();
  app.add_option("--config", config_path, "INI config file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override master_seed");
  app.add_option("--out", out_dir, "override output directory");
  app.add_option("--trials", trials, "override trial count");
  app.add_option("--n", n, "override instance size");
  auto* beta_opt = app.add_option("--beta", beta, "override beta (single value)");
  auto* beta_grid_opt =
      app.add_option("--beta-grid", beta_grid, "override beta grid (a:b:step or comma list)");
  app.add_option("--lambda", lambda, "override lambda (single value)");
  beta_opt->excludes(beta_grid_opt);
  beta_grid_opt->excludes(beta_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const swlab::harness::ConfigMap map = swlab::harness::load_ini(config_path);
    std::vector<std::pair<std::string, std::string>> overrides;
    if (app.count("--seed") > 0) overrides.emplace_back("master_seed", seed);
    if (app.count("--out") > 0) overrides.emplace_back("output_dir", out_dir);
    if (app.count("--trials") > 0) overrides.emplace_back("trials", trials);
    if (app.count("--n") > 0) overrides.emplace_back("n", n);
    if (app.count("--beta") > 0) overrides.emplace_back("beta", beta);
    if (app.count("--beta-grid") > 0) overrides.emplace_back("beta", beta_grid);
    if (app.count("--lambda") > 0) overrides.emplace_back("lambda", lambda);

    const swlab::harness::ExperimentConfig cfg = swlab::harness::build_config(
        swlab::harness::parse_experiment(experiment), map, overrides);
    const swlab::harness::RunSummary summary = swlab::harness::run_experiment(cfg);
    print_summary(summary);
    return summary.pass ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
