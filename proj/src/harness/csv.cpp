#include "swlab/harness/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace swlab::harness {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trial_csv_name(const std::string& experiment, std::size_t trial) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", trial);
  return experiment + "_" + buf + ".csv";
}

void write_trajectory_csv(const std::string& path, const dynamics::Trajectory& traj) {
  std::ofstream out = open_for_write(path);
  out << "step,correlation,energy,z_field\n";
  for (const auto& e : traj.entries) {
    out << e.step << ',' << format_double(e.correlation) << ',' << format_double(e.energy) << ',';
    if (e.z_field) out << format_double(*e.z_field);
    out << '\n';
  }
}

void write_amp_csv(const std::string& path, const std::vector<AmpTraceRow>& rows) {
  std::ofstream out = open_for_write(path);
  out << "t,correlation,se_m,se_q\n";
  for (const auto& r : rows)
    out << r.t << ',' << format_double(r.correlation) << ',' << format_double(r.se_m) << ','
        << format_double(r.se_q) << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_for_write(path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

}  // namespace swlab::harness
