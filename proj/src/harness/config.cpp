#include "swlab/harness/config.hpp"

#include "swlab/harness/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace swlab::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
  }
  if (used != value.size() || !std::isfinite(out))
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-')
    throw std::invalid_argument("config: key '" + key + "' expects a non-negative integer, got '" +
                                value + "'");
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a non-negative integer, got '" +
                                value + "'");
  }
  if (used != value.size())
    throw std::invalid_argument("config: key '" + key + "' expects a non-negative integer, got '" +
                                value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

std::string grid_to_string(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ",";
    out += format_double(grid[i]);
  }
  return out;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::FixedPoint: return "fixed_point";
    case Experiment::PhaseDiagram: return "phase_diagram";
    case Experiment::Glauber: return "glauber";
    case Experiment::Rgd: return "rgd";
    case Experiment::Prgd: return "prgd";
    case Experiment::Amp: return "amp";
    case Experiment::Compare: return "compare";
    case Experiment::Magnetization: return "magnetization";
    case Experiment::CurieWeiss: return "curie_weiss";
    case Experiment::OverlapProbe: return "overlap_probe";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  static const std::map<std::string, Experiment> table = {
      {"fixed_point", Experiment::FixedPoint},
      {"phase_diagram", Experiment::PhaseDiagram},
      {"glauber", Experiment::Glauber},
      {"rgd", Experiment::Rgd},
      {"prgd", Experiment::Prgd},
      {"amp", Experiment::Amp},
      {"compare", Experiment::Compare},
      {"magnetization", Experiment::Magnetization},
      {"curie_weiss", Experiment::CurieWeiss},
      {"overlap_probe", Experiment::OverlapProbe},
  };
  const auto it = table.find(name);
  if (it == table.end())
    throw std::invalid_argument("unknown experiment '" + name + "'");
  return it->second;
}

ConfigMap parse_ini(const std::string& text) {
  ConfigMap map;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      map[section];  // register even if empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    map[section][key] = value;
  }
  return map;
}

ConfigMap load_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ini(buf.str());
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    // inclusive range a:b:step
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
      throw std::invalid_argument("grid '" + text + "': expected a:b:step");
    const double a = parse_double("grid", trim(parts[0]));
    const double b = parse_double("grid", trim(parts[1]));
    const double step = parse_double("grid", trim(parts[2]));
    if (step <= 0.0 || b < a)
      throw std::invalid_argument("grid '" + text + "': requires b >= a and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  } else if (text.find(',') != std::string::npos) {
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) out.push_back(parse_double("grid", trim(cur)));
  } else {
    out.push_back(parse_double("grid", trim(text)));
  }
  if (out.empty()) throw std::invalid_argument("grid '" + text + "': empty");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1])
      throw std::invalid_argument("grid '" + text + "': must be strictly increasing");
  return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "n") {
    cfg.n = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "beta") {
    cfg.beta_grid = parse_grid(value);
  } else if (key == "lambda") {
    cfg.lambda_grid = parse_grid(value);
  } else if (key == "h") {
    cfg.h_grid = parse_grid(value);
  } else if (key == "trials") {
    cfg.trials = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "steps") {
    cfg.steps = parse_u64(key, value);
  } else if (key == "inner_steps") {
    cfg.inner_steps = parse_u64(key, value);
  } else if (key == "record_every") {
    cfg.record_every = parse_u64(key, value);
  } else if (key == "master_seed") {
    cfg.master_seed = parse_u64(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "tolerance") {
    cfg.tolerance = parse_double(key, value);
  } else if (key == "zero_tolerance") {
    cfg.zero_tolerance = parse_double(key, value);
  } else if (key == "pass_fraction_required") {
    cfg.pass_fraction_required = parse_double(key, value);
  } else if (key == "quad_nodes") {
    cfg.quad_nodes = static_cast<int>(parse_u64(key, value));
  } else if (key == "warm_r") {
    cfg.warm_r = parse_double(key, value);
  } else if (key == "sigma0_sq") {
    cfg.sigma0_sq = parse_double(key, value);
  } else if (key == "init") {
    if (value != "zero" && value != "spectral")
      throw std::invalid_argument("config: init must be 'zero' or 'spectral'");
    cfg.init = value;
  } else if (key == "onsager") {
    cfg.onsager = parse_bool(key, value);
  } else if (key == "sequential") {
    cfg.sequential = parse_bool(key, value);
  } else if (key == "workers") {
    cfg.workers = static_cast<std::size_t>(parse_u64(key, value));
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (n == 0) throw std::invalid_argument("config: n must be >= 1");
  if (trials == 0) throw std::invalid_argument("config: trials must be >= 1");
  auto check_grid = [](const std::vector<double>& g, const char* name, double lo) {
    if (g.empty()) throw std::invalid_argument(std::string("config: empty ") + name + " grid");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] < lo)
        throw std::invalid_argument(std::string("config: ") + name + " values must be >= " +
                                    std::to_string(lo));
      if (i && g[i] <= g[i - 1])
        throw std::invalid_argument(std::string("config: ") + name +
                                    " grid must be strictly increasing");
    }
  };
  check_grid(beta_grid, "beta", 0.0);
  check_grid(lambda_grid, "lambda", 0.0);
  check_grid(h_grid, "h", 0.0);
  if (quad_nodes < 21 || quad_nodes % 2 == 0)
    throw std::invalid_argument("config: quad_nodes must be odd and >= 21");
  if (pass_fraction_required <= 0.0 || pass_fraction_required > 1.0)
    throw std::invalid_argument("config: pass_fraction_required must lie in (0, 1]");
  if (std::abs(warm_r) > 1.0)
    throw std::invalid_argument("config: warm_r must lie in [-1, 1]");
  if (zero_tolerance <= 0.0)
    throw std::invalid_argument("config: zero_tolerance must be positive");
  if (init != "zero" && init != "spectral")
    throw std::invalid_argument("config: init must be 'zero' or 'spectral'");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.experiment == b.experiment && a.n == b.n && a.beta_grid == b.beta_grid &&
         a.lambda_grid == b.lambda_grid && a.h_grid == b.h_grid && a.trials == b.trials &&
         a.steps == b.steps && a.inner_steps == b.inner_steps &&
         a.record_every == b.record_every && a.master_seed == b.master_seed &&
         a.output_dir == b.output_dir && a.tolerance == b.tolerance &&
         a.zero_tolerance == b.zero_tolerance &&
         a.pass_fraction_required == b.pass_fraction_required && a.quad_nodes == b.quad_nodes &&
         a.warm_r == b.warm_r && a.sigma0_sq == b.sigma0_sq && a.init == b.init &&
         a.onsager == b.onsager && a.sequential == b.sequential && a.workers == b.workers;
}

void resolve_defaults(ExperimentConfig& cfg) {
  const double nd = static_cast<double>(cfg.n);
  const auto n_log_n = static_cast<std::uint64_t>(
      std::ceil(20.0 * nd * std::log(std::max(nd, 2.0))));
  if (cfg.inner_steps == 0) cfg.inner_steps = n_log_n;
  // The scalar integrands sharpen like 1/beta in the Gaussian variable, so
  // the wide default temperature sweep needs a denser rule to classify its
  // coldest cells; everything else is accurate at the module default.
  if (cfg.quad_nodes == 0)
    cfg.quad_nodes = cfg.experiment == Experiment::PhaseDiagram ? 2001
                                                                : scalar::kDefaultQuadNodes;
  switch (cfg.experiment) {
    case Experiment::FixedPoint:
    case Experiment::PhaseDiagram:
      if (cfg.steps == 0) cfg.steps = 1;
      if (cfg.record_every == 0) cfg.record_every = 1;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.05;
      break;
    case Experiment::Glauber:
      if (cfg.steps == 0) cfg.steps = 10 * static_cast<std::uint64_t>(cfg.n) * cfg.n;
      if (cfg.record_every == 0) cfg.record_every = cfg.n;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.05;
      break;
    case Experiment::Rgd:
    case Experiment::Prgd:
      if (cfg.steps == 0) cfg.steps = 200;
      if (cfg.record_every == 0) cfg.record_every = 1;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.05;
      break;
    case Experiment::Amp:
      if (cfg.steps == 0) cfg.steps = 30;
      if (cfg.record_every == 0) cfg.record_every = 1;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.05;
      break;
    case Experiment::Compare:
      if (cfg.steps == 0) cfg.steps = 1;
      if (cfg.record_every == 0) cfg.record_every = 1;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.05;
      break;
    case Experiment::Magnetization:
      // measurement budget per field value; a quarter of it is burned in
      if (cfg.steps == 0) cfg.steps = 2 * n_log_n;
      if (cfg.record_every == 0) cfg.record_every = 1;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.03;
      break;
    case Experiment::CurieWeiss:
      if (cfg.steps == 0) cfg.steps = 200;
      if (cfg.record_every == 0) cfg.record_every = 1;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.02;
      break;
    case Experiment::OverlapProbe:
      if (cfg.steps == 0) cfg.steps = 1;
      if (cfg.record_every == 0) cfg.record_every = 1;
      if (cfg.tolerance < 0.0) cfg.tolerance = 0.03;
      break;
  }
}

namespace {

ExperimentConfig experiment_base(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::FixedPoint:
      cfg.trials = 1;
      break;
    case Experiment::PhaseDiagram:
      cfg.trials = 1;
      cfg.beta_grid = parse_grid("0.1:12:0.1");
      cfg.lambda_grid = {2.0};
      break;
    case Experiment::Glauber:
      break;
    case Experiment::Rgd:
      cfg.trials = 10;
      break;
    case Experiment::Prgd:
      cfg.trials = 10;
      break;
    case Experiment::Amp:
      cfg.n = 2000;
      cfg.trials = 10;
      break;
    case Experiment::Compare:
      cfg.n = 2000;
      cfg.beta_grid = {1.5};
      cfg.lambda_grid = {1.5};
      break;
    case Experiment::Magnetization:
      cfg.n = 3000;
      cfg.trials = 1;
      cfg.beta_grid = {0.5};
      cfg.h_grid = parse_grid("0.05:0.5:0.05");
      cfg.pass_fraction_required = 1.0;
      break;
    case Experiment::CurieWeiss:
      cfg.n = 2000;
      cfg.trials = 10;
      cfg.beta_grid = {0.5};
      cfg.h_grid = {0.2};
      break;
    case Experiment::OverlapProbe:
      cfg.n = 1000;
      cfg.trials = 50;
      cfg.beta_grid = {0.5};
      cfg.h_grid = {0.3};
      break;
  }
  return cfg;
}

}  // namespace

ExperimentConfig build_config(Experiment experiment, const ConfigMap& map,
                              const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentConfig cfg = experiment_base(experiment);
  const auto apply_section = [&](const std::string& name) {
    const auto it = map.find(name);
    if (it == map.end()) return;
    for (const auto& [key, value] : it->second) apply_key(cfg, key, value);
  };
  apply_section("");
  apply_section(experiment_name(experiment));
  for (const auto& [key, value] : overrides) apply_key(cfg, key, value);
  resolve_defaults(cfg);
  cfg.validate();
  return cfg;
}

std::string to_ini(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[" << experiment_name(cfg.experiment) << "]\n";
  out << "n = " << cfg.n << "\n";
  out << "beta = " << grid_to_string(cfg.beta_grid) << "\n";
  out << "lambda = " << grid_to_string(cfg.lambda_grid) << "\n";
  out << "h = " << grid_to_string(cfg.h_grid) << "\n";
  out << "trials = " << cfg.trials << "\n";
  out << "steps = " << cfg.steps << "\n";
  out << "inner_steps = " << cfg.inner_steps << "\n";
  out << "record_every = " << cfg.record_every << "\n";
  out << "master_seed = " << cfg.master_seed << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  out << "tolerance = " << format_double(cfg.tolerance) << "\n";
  out << "zero_tolerance = " << format_double(cfg.zero_tolerance) << "\n";
  out << "pass_fraction_required = " << format_double(cfg.pass_fraction_required) << "\n";
  out << "quad_nodes = " << cfg.quad_nodes << "\n";
  out << "warm_r = " << format_double(cfg.warm_r) << "\n";
  out << "sigma0_sq = " << format_double(cfg.sigma0_sq) << "\n";
  out << "init = " << cfg.init << "\n";
  out << "onsager = " << (cfg.onsager ? "true" : "false") << "\n";
  out << "sequential = " << (cfg.sequential ? "true" : "false") << "\n";
  out << "workers = " << cfg.workers << "\n";
  return out.str();
}

}  // namespace swlab::harness
