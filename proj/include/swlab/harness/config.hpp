#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "swlab/scalar/params.hpp"

namespace swlab::harness {

enum class Experiment {
  FixedPoint,
  PhaseDiagram,
  Glauber,
  Rgd,
  Prgd,
  Amp,
  Compare,
  Magnetization,
  CurieWeiss,
  OverlapProbe,
};

const char* experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

// Flat key = value configuration with one [section] per experiment; keys in
// the anonymous leading section apply to every experiment and are overridden
// by the experiment's own section. Unknown keys are input errors.
struct ExperimentConfig {
  Experiment experiment = Experiment::Glauber;
  std::size_t n = 1000;
  std::vector<double> beta_grid{0.8};
  std::vector<double> lambda_grid{2.0};
  std::vector<double> h_grid{0.0};
  std::size_t trials = 20;
  std::uint64_t steps = 0;          // 0 = experiment default, resolved at build
  std::uint64_t inner_steps = 0;    // 0 = ceil(20 n ln n), resolved at build
  std::uint64_t record_every = 0;   // 0 = experiment default, resolved at build
  std::uint64_t master_seed = 20250819;
  std::string output_dir = "out";
  double tolerance = -1.0;          // < 0 = experiment default, resolved at build
  double zero_tolerance = 0.1;      // |R| band when the predicted optimum is 0
  double pass_fraction_required = 0.8;
  int quad_nodes = 0;               // 0 = module default (2001 for phase_diagram,
                                    //     whose default grid reaches beta = 12)
  double warm_r = 0.6;              // prescribed start correlation (compare)
  double sigma0_sq = -1.0;          // < 0 = derive from the measured spectral correlation
  std::string init = "spectral";    // amp initialization: zero | spectral
  bool onsager = true;              // amp memory term (false = ablation)
  bool sequential = false;          // sequential-scan site order (glauber)
  std::size_t workers = 0;          // 0 = hardware concurrency

  double beta() const { return beta_grid.front(); }
  double lambda() const { return lambda_grid.front(); }
  double h() const { return h_grid.front(); }

  void validate() const;  // throws std::invalid_argument
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

using SectionMap = std::map<std::string, std::string>;
using ConfigMap = std::map<std::string, SectionMap>;

// Parses INI-lite text: blank lines skipped, # and ; start comments,
// [section] headers, key = value entries. Malformed lines are input errors.
ConfigMap parse_ini(const std::string& text);
ConfigMap load_ini(const std::string& path);

// Grid syntax: a single number, a comma list "a,b,c", or an inclusive range
// "a:b:step". Result must be non-empty and strictly increasing.
std::vector<double> parse_grid(const std::string& text);

// Applies one key = value pair onto cfg; unknown key -> input error.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Builds the effective config: per-experiment defaults, then the global
// section, then the experiment's section, then `overrides` (e.g. from the
// command line), then default resolution + validation.
ExperimentConfig build_config(Experiment experiment, const ConfigMap& map,
                              const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Fills the 0 / negative sentinels with the experiment's defaults.
void resolve_defaults(ExperimentConfig& cfg);

// Serializes the full effective config; parsing the result reproduces cfg.
std::string to_ini(const ExperimentConfig& cfg);

}  // namespace swlab::harness
