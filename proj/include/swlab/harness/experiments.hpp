#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swlab/harness/config.hpp"

namespace swlab::harness {

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double final_correlation = 0.0;
  double deviation = 0.0;  // distance from the trial's target (see experiment docs)
  bool pass = false;
  std::string csv;               // per-trial file, relative to output_dir
  double escape_step = -1.0;     // first outer step with |R| >= opt/2 (two-stage runs)
  double extra = 0.0;            // experiment-specific scalar (e.g. predicted value)
};

struct RunSummary {
  ExperimentConfig config;
  double opt = 0.0;
  std::string regime;
  double pass_fraction = 0.0;
  bool pass = false;
  double p10 = 0.0, p50 = 0.0, p90 = 0.0;  // quantiles of per-trial deviations
  double wall_ms = 0.0;
  std::vector<TrialRecord> records;
  std::vector<std::string> regimes_witnessed;  // grid tabulations only
};

// Runs the configured experiment: derives one seed per trial from the master
// seed, executes trials on a bounded worker pool, writes per-trial CSVs, the
// effective config echo, and {experiment}_summary.json into
// config.output_dir, and aggregates pass/fail against the tolerance.
RunSummary run_experiment(const ExperimentConfig& cfg);

// JSON document written for the summary (also returned for inspection).
std::string summary_json_text(const RunSummary& summary);

// p in [0,1]; linear interpolation between order statistics.
double quantile(std::vector<double> values, double p);

}  // namespace swlab::harness
