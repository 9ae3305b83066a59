#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abbm/estimators.hpp"

namespace abbm::harness {

inline constexpr const char* kToolName = "abbm";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Resolved experiment configuration. Text form is `key = value` per line,
/// `#` starts a comment, lists are comma separated.
struct ExperimentConfig {
  // model
  double beta = 1.0;
  double rho = 0.0;
  double x0 = 1.0;
  Frame frame = Frame::StandardWithMovingBarrier;
  std::map<int, double> offspring{{2, 1.0}};
  // run
  std::size_t replicas = 100;
  double horizon = 10.0;
  double dt = 1.0;
  std::vector<double> checkpoints;  // overrides horizon/dt when set
  BarrierMode barrier_mode = BarrierMode::Kill;
  std::optional<double> upper_line_z;
  std::size_t population_cap = 10'000'000;
  std::optional<std::size_t> saturation_count;
  // analysis
  std::vector<double> truncation_s;
  std::vector<std::string> phi;
  double phi_delta = 0.25;
  std::vector<double> late_touch_s;
  double late_touch_a = 2.0;
  // execution
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: all cores
  std::string output = "-";
  std::string summary;

  /// Applies one `key=value` assignment; ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  /// Canonical text of every result-affecting key, sorted by key. Threads and
  /// output paths are excluded so the hash identifies the experiment.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

  std::vector<double> checkpoint_grid() const;
  ExperimentSpec to_spec() const;
  /// Throws ConfigError (or ParameterError from the model) if inconsistent.
  void validate() const;

 private:
  bool offspring_set_ = false;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::string trim(const std::string& s);
std::vector<double> parse_list(const std::string& value, const std::string& key);
double parse_double(const std::string& value, const std::string& key);
std::uint64_t parse_uint(const std::string& value, const std::string& key);
std::string fnv1a_hex(const std::string& text);

}  // namespace abbm::harness
