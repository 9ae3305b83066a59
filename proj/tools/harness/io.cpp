#include "io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "abbm/errors.hpp"

namespace abbm::harness {

std::string fmt17(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

namespace {

void dump_into(std::string& out, const Json& v) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        dump_into(out, item);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        dump_into(out, v[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += fmt17(v.get<double>());
      break;
    default:
      out += v.dump();
  }
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::string status_of(const ReplicaSummary& r, std::size_t k) {
  if (!r.observed(k)) return "unobserved";
  const auto& v = r.checkpoints[k];
  if (v.alive == 0) return "extinct";
  if (r.saturation_time && k + 1 == r.checkpoints.size()) return "saturated";
  return "alive";
}

Json checkpoint_line(const Dataset& d, const ReplicaSummary& r, std::size_t k) {
  Json j;
  j["type"] = "checkpoint";
  j["replica"] = r.index;
  j["checkpoint"] = k;
  j["t"] = d.checkpoint_times[k];
  j["status"] = status_of(r, k);
  const std::size_t n_phi = d.functionals.test_functions.size();
  const std::size_t n_late = d.functionals.late_touch_times.size();
  const std::size_t n_s = d.functionals.truncation_times.size();
  if (!r.observed(k)) {
    for (const char* key : {"alive", "survivors", "ever_created", "upper_line_untouched", "W",
                            "W_tilde", "Z", "Z_tilde", "V", "V_tilde", "U"})
      j[key] = nullptr;
    j["Z_s"] = Json(std::vector<std::nullptr_t>(n_s, nullptr));
    j["max_all"] = nullptr;
    j["max_survivors"] = nullptr;
    j["laplace"] = Json(std::vector<std::nullptr_t>(n_phi, nullptr));
    j["late_touch"] = Json(std::vector<std::nullptr_t>(n_late, nullptr));
    return j;
  }
  const auto& v = r.checkpoints[k];
  j["alive"] = v.alive;
  j["survivors"] = v.survivors;
  j["ever_created"] = v.ever_created;
  j["upper_line_untouched"] = v.upper_line_untouched ? Json(*v.upper_line_untouched) : Json(nullptr);
  j["W"] = opt(v.W);
  j["W_tilde"] = opt(v.W_tilde);
  j["Z"] = opt(v.Z);
  j["Z_tilde"] = opt(v.Z_tilde);
  j["V"] = opt(v.V);
  j["V_tilde"] = opt(v.V_tilde);
  j["U"] = opt(v.U);
  j["Z_s"] = v.Z_s.size() == n_s ? doubles(v.Z_s) : Json(std::vector<std::nullptr_t>(n_s, nullptr));
  j["max_all"] = opt(v.max_all);
  j["max_survivors"] = opt(v.max_survivors);
  j["laplace"] = doubles(v.laplace);
  Json late = Json::array();
  for (bool b : v.late_touch) late.push_back(b);
  j["late_touch"] = late;
  return j;
}

const Json& require(const Json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(fmt::format("dataset line {}: missing field '{}'", line, key));
  return *it;
}

std::optional<double> read_opt(const Json& j, const char* key, std::size_t line) {
  const Json& v = require(j, key, line);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ConfigError(fmt::format("dataset line {}: field '{}' is not numeric", line, key));
  return v.get<double>();
}

}  // namespace

std::string dump(const Json& value) {
  std::string out;
  dump_into(out, value);
  return out;
}

Json config_json(const ExperimentConfig& cfg) {
  Json c;
  c["beta"] = cfg.beta;
  c["rho"] = cfg.rho;
  c["x0"] = cfg.x0;
  c["frame"] = to_string(cfg.frame);
  Json law;
  for (const auto& [k, p] : cfg.offspring) law[fmt::format("p_{}", k)] = p;
  c["offspring"] = law;
  c["replicas"] = cfg.replicas;
  c["checkpoints"] = doubles(cfg.checkpoint_grid());
  c["barrier_mode"] = to_string(cfg.barrier_mode);
  c["upper_line_z"] = opt(cfg.upper_line_z);
  c["population_cap"] = cfg.population_cap;
  c["saturation_count"] = cfg.saturation_count ? Json(*cfg.saturation_count) : Json(nullptr);
  c["truncation_s"] = doubles(cfg.truncation_s);
  c["phi"] = cfg.phi;
  c["phi_delta"] = cfg.phi_delta;
  c["late_touch_s"] = doubles(cfg.late_touch_s);
  c["late_touch_A"] = cfg.late_touch_a;
  c["seed"] = cfg.seed;
  return c;
}

ExperimentConfig config_from_json(const Json& c) {
  ExperimentConfig cfg;
  auto list = [](const Json& a) {
    std::vector<std::string> parts;
    for (const auto& x : a) parts.push_back(x.is_string() ? x.get<std::string>() : fmt17(x.get<double>()));
    return fmt::format("{}", fmt::join(parts, ","));
  };
  for (const auto& [key, v] : c.items()) {
    if (key == "offspring") {
      for (const auto& [k, p] : v.items()) cfg.set(k, fmt17(p.get<double>()));
      continue;
    }
    std::string text;
    if (v.is_null()) text = "none";
    else if (v.is_array()) text = list(v);
    else if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number_unsigned() || v.is_number_integer()) text = std::to_string(v.get<std::uint64_t>());
    else if (v.is_number()) text = fmt17(v.get<double>());
    else throw ConfigError(fmt::format("config field '{}' has an unexpected type", key));
    cfg.set(key, text);
  }
  return cfg;
}

Json provenance(const ExperimentConfig& cfg) {
  Json h;
  h["tool"] = kToolName;
  h["tool_version"] = kToolVersion;
  h["schema_version"] = kSchemaVersion;
  h["config_hash"] = cfg.hash();
  h["master_seed"] = cfg.seed;
  return h;
}

std::string csv_header_block(const Json& p) {
  std::string out;
  for (const auto& [k, v] : p.items()) out += fmt::format("# {}: {}\n", k, v.is_string() ? v.get<std::string>() : dump(v));
  return out;
}

std::string csv_header_block(const ExperimentConfig& cfg) { return csv_header_block(provenance(cfg)); }

void write_dataset(std::ostream& out, const ExperimentConfig& cfg, const Dataset& d) {
  Json header;
  header["type"] = "header";
  const Json prov = provenance(cfg);
  for (const auto& [k, v] : prov.items()) header[k] = v;
  header["config"] = config_json(cfg);
  header["lambda_star"] = d.params.lambda_star;
  header["fields"] = {"replica", "checkpoint", "t", "status", "alive", "survivors", "ever_created",
                      "upper_line_untouched", "W", "W_tilde", "Z", "Z_tilde", "V", "V_tilde", "U",
                      "Z_s", "max_all", "max_survivors", "laplace", "late_touch"};
  out << dump(header) << '\n';
  std::size_t lines = 0;
  for (const auto& r : d.replicas)
    for (std::size_t k = 0; k < d.checkpoint_times.size(); ++k, ++lines)
      out << dump(checkpoint_line(d, r, k)) << '\n';
  Json footer;
  footer["type"] = "footer";
  footer["replicas"] = d.replicas.size();
  footer["lines"] = lines;
  out << dump(footer) << '\n';
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg, const Dataset& d) {
  out << csv_header_block(cfg);
  out << "functional,t,n,mean,se\n";
  auto row = [&](const std::string& name, double t, const Estimate& e) {
    out << name << ',' << fmt17(t) << ',' << e.n << ',' << fmt17(e.value) << ',' << fmt17(e.se) << '\n';
  };
  for (std::size_t k = 0; k < d.checkpoint_times.size(); ++k) {
    const double t = d.checkpoint_times[k];
    row("survival", t, survival_prob(d, t));
    for (const char* name : {"alive", "survivors", "W", "W_tilde", "Z", "Z_tilde", "V", "V_tilde", "U",
                             "max_survivors", "max_all"}) {
      std::vector<double> values;
      try {
        values = functional_values(d, name, k);
      } catch (const StateError&) {
        continue;
      }
      if (!values.empty()) row(name, t, mean_estimate(values));
    }
    for (std::size_t j = 0; j < d.functionals.truncation_times.size(); ++j) {
      Accumulator acc;
      for (const auto& r : d.replicas)
        if (r.observed(k) && j < r.checkpoints[k].Z_s.size()) acc.add(r.checkpoints[k].Z_s[j]);
      if (acc.count()) row(fmt::format("Z_s[s={}]", fmt17(d.functionals.truncation_times[j])), t, acc.estimate());
    }
    for (const auto& phi : d.functionals.test_functions)
      row(fmt::format("laplace[{}]", phi.name()), t, laplace_functional_estimate(d, phi, t));
    for (double s : d.functionals.late_touch_times)
      row(fmt::format("late_touch[s={}]", fmt17(s)), t, late_touch_prob(d, s, t));
  }
}

LoadedDataset read_dataset(std::istream& in) {
  LoadedDataset out;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false, have_footer = false;
  std::size_t expected_replicas = 0;
  Dataset& d = out.dataset;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("dataset line {}: invalid JSON ({})", lineno, e.what()));
    }
    const std::string type = require(j, "type", lineno).get<std::string>();
    if (!have_header) {
      if (type != "header") throw ConfigError("dataset does not start with a header line");
      const int version = require(j, "schema_version", lineno).get<int>();
      if (version > kSchemaVersion)
        throw ConfigError(fmt::format("dataset schema version {} is newer than supported version {}",
                                      version, kSchemaVersion));
      out.header = j;
      out.config = config_from_json(require(j, "config", lineno));
      const ExperimentSpec spec = out.config.to_spec();
      d.params = spec.params;
      d.mode = spec.options.barrier_mode;
      d.upper_line = spec.options.upper_line;
      d.checkpoint_times = spec.options.checkpoints;
      d.functionals = spec.functionals;
      d.master_seed = spec.master_seed;
      have_header = true;
      continue;
    }
    if (type == "footer") {
      expected_replicas = require(j, "replicas", lineno).get<std::size_t>();
      have_footer = true;
      break;
    }
    if (type != "checkpoint") throw ConfigError(fmt::format("dataset line {}: unknown record type '{}'", lineno, type));

    const auto replica = require(j, "replica", lineno).get<std::size_t>();
    const auto k = require(j, "checkpoint", lineno).get<std::size_t>();
    if (k >= d.checkpoint_times.size())
      throw ConfigError(fmt::format("dataset line {}: checkpoint index {} out of range", lineno, k));
    if (d.replicas.empty() || d.replicas.back().index != replica) {
      ReplicaSummary r;
      r.index = replica;
      r.seed = SeedMaterial{d.master_seed, replica};
      d.replicas.push_back(std::move(r));
    }
    ReplicaSummary& r = d.replicas.back();
    const std::string status = require(j, "status", lineno).get<std::string>();
    for (const char* key : {"t", "alive", "survivors", "ever_created", "upper_line_untouched", "W", "W_tilde",
                            "Z", "Z_tilde", "V", "V_tilde", "U", "Z_s", "max_all", "max_survivors",
                            "laplace", "late_touch"})
      require(j, key, lineno);
    if (status == "unobserved") continue;
    if (k != r.checkpoints.size())
      throw ConfigError(fmt::format("dataset line {}: checkpoints of replica {} out of order", lineno, replica));
    CheckpointValues v;
    v.time = d.checkpoint_times[k];
    v.alive = j["alive"].get<std::size_t>();
    v.survivors = j["survivors"].get<std::size_t>();
    v.ever_created = j["ever_created"].get<std::uint64_t>();
    if (!j["upper_line_untouched"].is_null()) v.upper_line_untouched = j["upper_line_untouched"].get<bool>();
    v.W = read_opt(j, "W", lineno);
    v.W_tilde = read_opt(j, "W_tilde", lineno);
    v.Z = read_opt(j, "Z", lineno);
    v.Z_tilde = read_opt(j, "Z_tilde", lineno);
    v.V = read_opt(j, "V", lineno);
    v.V_tilde = read_opt(j, "V_tilde", lineno);
    v.U = read_opt(j, "U", lineno);
    for (const auto& x : j["Z_s"])
      if (!x.is_null()) v.Z_s.push_back(x.get<double>());
    v.max_all = read_opt(j, "max_all", lineno);
    v.max_survivors = read_opt(j, "max_survivors", lineno);
    for (const auto& x : j["laplace"]) v.laplace.push_back(x.get<double>());
    for (const auto& x : j["late_touch"]) v.late_touch.push_back(x.get<bool>());
    if (v.laplace.size() != d.functionals.test_functions.size() ||
        v.late_touch.size() != d.functionals.late_touch_times.size())
      throw ConfigError(fmt::format("dataset line {}: array lengths disagree with the header", lineno));
    if (status == "saturated") r.saturation_time = v.time;
    if (status == "extinct" && !r.extinction_time) r.extinction_time = v.time;
    r.checkpoints.push_back(std::move(v));
  }
  if (!have_header) throw EmptyDataError("dataset is empty (no header line)");
  if (!have_footer) throw ConfigError("dataset is truncated (no footer line)");
  if (d.replicas.empty()) throw EmptyDataError("dataset holds no replicas");
  if (expected_replicas != d.replicas.size())
    throw ConfigError(fmt::format("dataset footer announces {} replicas, found {}", expected_replicas,
                                  d.replicas.size()));
  return out;
}

LoadedDataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open dataset '{}'", path));
  return read_dataset(in);
}

}  // namespace abbm::harness
