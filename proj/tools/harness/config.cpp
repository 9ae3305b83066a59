#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "abbm/errors.hpp"

namespace abbm::harness {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("key '{}': '{}' is not a number", key, value));
  }
}

std::uint64_t parse_uint(const std::string& value, const std::string& key) {
  if (value.empty() || !std::all_of(value.begin(), value.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ConfigError(fmt::format("key '{}': '{}' is not a nonnegative integer", key, value));
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("key '{}': '{}' is out of range", key, value));
  }
}

std::vector<double> parse_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, key));
  }
  return out;
}

namespace {

std::vector<std::string> parse_names(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool_or_none(const std::string& v) { return v == "none" || v.empty(); }

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string list(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(num(x));
  return fmt::format("{}", fmt::join(parts, ","));
}

}  // namespace

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key.size() > 2 && key.rfind("p_", 0) == 0) {
    const std::string k = key.substr(2);
    if (k == "0")
      throw ConfigError(
          "offspring law assigns p_0: the model requires L >= 1 (no death without offspring)");
    const auto idx = parse_uint(k, key);
    if (idx == 0 || idx > 64) throw ConfigError(fmt::format("key '{}': offspring index out of range", key));
    if (!offspring_set_) {
      offspring.clear();
      offspring_set_ = true;
    }
    offspring[static_cast<int>(idx)] = parse_double(value, key);
    return;
  }
  if (key == "beta") beta = parse_double(value, key);
  else if (key == "rho") rho = parse_double(value, key);
  else if (key == "x0") x0 = parse_double(value, key);
  else if (key == "frame") frame = frame_from_string(value);
  else if (key == "replicas") replicas = parse_uint(value, key);
  else if (key == "horizon") horizon = parse_double(value, key);
  else if (key == "dt") dt = parse_double(value, key);
  else if (key == "checkpoints") checkpoints = parse_list(value, key);
  else if (key == "barrier_mode") barrier_mode = barrier_mode_from_string(value);
  else if (key == "upper_line_z") {
    if (parse_bool_or_none(value)) upper_line_z.reset();
    else upper_line_z = parse_double(value, key);
  } else if (key == "population_cap") population_cap = parse_uint(value, key);
  else if (key == "saturation_count") {
    if (parse_bool_or_none(value)) saturation_count.reset();
    else saturation_count = parse_uint(value, key);
  } else if (key == "truncation_s") truncation_s = parse_list(value, key);
  else if (key == "phi") phi = parse_names(value);
  else if (key == "phi_delta") phi_delta = parse_double(value, key);
  else if (key == "late_touch_s") late_touch_s = parse_list(value, key);
  else if (key == "late_touch_A") late_touch_a = parse_double(value, key);
  else if (key == "seed") seed = parse_uint(value, key);
  else if (key == "threads") threads = static_cast<unsigned>(parse_uint(value, key));
  else if (key == "output") output = value;
  else if (key == "summary") summary = value;
  else throw ConfigError(fmt::format("unknown configuration key '{}'", key));
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["beta"] = num(beta);
  kv["rho"] = num(rho);
  kv["x0"] = num(x0);
  kv["frame"] = to_string(frame);
  for (const auto& [k, p] : offspring) kv[fmt::format("p_{}", k)] = num(p);
  kv["replicas"] = std::to_string(replicas);
  kv["checkpoints"] = list(checkpoint_grid());
  kv["barrier_mode"] = to_string(barrier_mode);
  kv["upper_line_z"] = upper_line_z ? num(*upper_line_z) : "none";
  kv["population_cap"] = std::to_string(population_cap);
  kv["saturation_count"] = saturation_count ? std::to_string(*saturation_count) : "none";
  kv["truncation_s"] = list(truncation_s);
  kv["phi"] = fmt::format("{}", fmt::join(phi, ","));
  kv["phi_delta"] = num(phi_delta);
  kv["late_touch_s"] = list(late_touch_s);
  kv["late_touch_A"] = num(late_touch_a);
  kv["seed"] = std::to_string(seed);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(canonical()); }

std::vector<double> ExperimentConfig::checkpoint_grid() const {
  if (!checkpoints.empty()) return checkpoints;
  if (!(horizon > 0.0) || !(dt > 0.0)) throw ConfigError("horizon and dt must be positive");
  return uniform_checkpoints(horizon, dt);
}

void ExperimentConfig::validate() const {
  if (replicas == 0) throw ConfigError("replicas must be at least 1");
  const auto grid = checkpoint_grid();
  if (grid.empty()) throw ConfigError("the checkpoint grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw ConfigError("checkpoints must be positive and strictly increasing");
  if (!(phi_delta > 0.0)) throw ConfigError("phi_delta must be positive");
  for (const auto& name : phi) canonical_test_function(name, phi_delta);
  if (!(late_touch_a >= 0.0)) throw ConfigError("late_touch_A must be nonnegative");
  if (!late_touch_s.empty() && barrier_mode != BarrierMode::Tag)
    throw ConfigError("late_touch_s needs barrier_mode = tag");
  if (frame == Frame::NoBarrier && barrier_mode == BarrierMode::Tag && !late_touch_s.empty())
    throw ConfigError("late_touch_s needs a barrier frame");
  ModelParams::make(beta, rho, x0, frame, OffspringLaw::from_probabilities(offspring));
}

ExperimentSpec ExperimentConfig::to_spec() const {
  validate();
  ExperimentSpec spec;
  spec.params = ModelParams::make(beta, rho, x0, frame, OffspringLaw::from_probabilities(offspring));
  spec.options.checkpoints = checkpoint_grid();
  spec.options.barrier_mode = barrier_mode;
  spec.options.upper_line = upper_line_z;
  spec.options.population_cap = population_cap;
  spec.options.saturation_count = saturation_count;
  spec.functionals.upper_line = upper_line_z;
  spec.functionals.truncation_times = truncation_s;
  for (const auto& name : phi) spec.functionals.test_functions.push_back(canonical_test_function(name, phi_delta));
  spec.functionals.late_touch_times = late_touch_s;
  spec.functionals.late_touch_window = late_touch_a;
  spec.replicas = replicas;
  spec.master_seed = seed;
  spec.threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  return spec;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("config line {}: expected key = value", lineno));
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace abbm::harness
