#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swlab/dynamics/ising.hpp"

namespace swlab::harness {

// Shortest decimal rendering that parses back to exactly the same double,
// used for every numeric CSV and config-echo cell, so reruns with the same
// seed are byte-identical and files stay human-readable.
std::string format_double(double v);

// "{experiment}_{trial:04}.csv"
std::string trial_csv_name(const std::string& experiment, std::size_t trial);

// Columns: step,correlation,energy,z_field (z_field cell empty when absent).
void write_trajectory_csv(const std::string& path, const dynamics::Trajectory& traj);

// Per-iteration comparison trace of the message-passing run:
// columns t,correlation,se_m,se_q.
struct AmpTraceRow {
  std::uint64_t t = 0;
  double correlation = 0.0;
  double se_m = 0.0;
  double se_q = 0.0;
};
void write_amp_csv(const std::string& path, const std::vector<AmpTraceRow>& rows);

// Generic table with a header row; cells are written verbatim.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

}  // namespace swlab::harness
