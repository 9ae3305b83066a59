#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "abbm/errors.hpp"
#include "abbm/oracles.hpp"
#include "abbm/point_process.hpp"

namespace abbm::harness {

namespace {

// Opens `path` for writing, or returns `fallback` for "-" / empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

ExperimentConfig resolve_config(const std::string& path, const std::vector<std::string>& sets) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("--set expects key=value, got '{}'", s));
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return cfg;
}

Json estimate_json(const Estimate& e) {
  Json j;
  j["value"] = e.value;
  j["se"] = e.se;
  j["n"] = e.n;
  return j;
}

double param(const std::map<std::string, std::string>& p, const std::string& key,
             std::optional<double> fallback = std::nullopt) {
  const auto it = p.find(key);
  if (it == p.end()) {
    if (fallback) return *fallback;
    throw ConfigError(fmt::format("oracle parameter '{}' is required", key));
  }
  return parse_double(it->second, key);
}

OffspringLaw law_from(const std::map<std::string, std::string>& p) {
  std::map<int, double> probs;
  for (const auto& [k, v] : p) {
    if (k.rfind("p_", 0) != 0) continue;
    if (k == "p_0")
      throw ConfigError("offspring law assigns p_0: the model requires L >= 1 (no death without offspring)");
    probs[static_cast<int>(parse_uint(k.substr(2), k))] = parse_double(v, k);
  }
  return probs.empty() ? OffspringLaw::dyadic() : OffspringLaw::from_probabilities(probs);
}

double lambda_from(const std::map<std::string, std::string>& p) {
  const double beta = param(p, "beta", 1.0);
  if (p.count("m")) {
    const double m = param(p, "m");
    if (!(m > 1.0)) throw ParameterError("offspring mean m must exceed 1");
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    return std::sqrt(2.0 * beta * (m - 1.0));
  }
  return lambda_star(beta, law_from(p));
}

std::vector<std::string> sorted_keys(const std::map<std::string, std::string>& p) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : p) keys.push_back(k);
  return keys;
}

void check_keys(const std::map<std::string, std::string>& p, std::initializer_list<const char*> allowed,
                bool offspring) {
  for (const auto& k : sorted_keys(p)) {
    if (offspring && k.rfind("p_", 0) == 0) continue;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      throw ConfigError(fmt::format("unknown oracle parameter '{}'", k));
  }
}

}  // namespace

std::vector<std::string> oracle_catalog() {
  return {"lambda_star", "centering", "hit_prob_line", "hitting_density", "hitting_cdf",
          "hitting_mean", "stay_above", "abk", "wave", "many_to_one"};
}

Json run_oracle(const std::string& name, const std::map<std::string, std::string>& p, std::ostream& out) {
  Json j;
  j["oracle"] = name;
  if (name == "lambda_star") {
    check_keys(p, {"beta", "m"}, true);
    j["value"] = lambda_from(p);
  } else if (name == "centering") {
    check_keys(p, {"t", "beta", "m", "rho"}, true);
    j["value"] = centering(param(p, "t"), lambda_from(p), param(p, "rho", 0.0));
  } else if (name == "hit_prob_line") {
    check_keys(p, {"y", "mu"}, false);
    const LineHit h = hit_prob_line(param(p, "y"), param(p, "mu"));
    j["value"] = h.stay_below;
    j["stay_below"] = h.stay_below;
    j["hit"] = h.hit;
    j["certain_hit"] = h.certain;
  } else if (name == "hitting_density") {
    check_keys(p, {"x", "rho", "r"}, false);
    j["value"] = hitting_time_density(param(p, "x"), param(p, "rho", 0.0), param(p, "r"));
  } else if (name == "hitting_cdf") {
    check_keys(p, {"x", "rho", "r"}, false);
    j["value"] = hitting_time_cdf(param(p, "x"), param(p, "rho", 0.0), param(p, "r"));
  } else if (name == "hitting_mean") {
    check_keys(p, {"x", "mu"}, false);
    j["value"] = hitting_time_mean(param(p, "x"), param(p, "mu"));
  } else if (name == "stay_above") {
    check_keys(p, {"x", "rho", "t"}, false);
    j["value"] = stay_above_line(param(p, "x"), param(p, "rho", 0.0), param(p, "t"));
  } else if (name == "abk") {
    check_keys(p, {"y", "t", "b", "beta", "m", "t0"}, true);
    j["value"] = abk_tail_bound(param(p, "y"), param(p, "t"), param(p, "b", 1.0), lambda_from(p),
                                param(p, "t0", 5.0));
  } else if (name == "wave") {
    check_keys(p, {"rho", "beta", "x_max", "every"}, true);
    WaveOptions opt;
    opt.beta = param(p, "beta", 1.0);
    opt.x_max = param(p, "x_max", 40.0);
    const double rho = param(p, "rho", 0.0);
    const auto every = static_cast<std::size_t>(std::max(1.0, param(p, "every", 1.0)));
    const WaveSolution sol = solve_travelling_wave(rho, law_from(p), opt);
    out << "# oracle: wave\n";
    out << "# rho: " << fmt17(rho) << '\n';
    out << "# slope_at_zero: " << fmt17(sol.slope_at_zero) << '\n';
    out << "# residual: " << fmt17(sol.residual) << '\n';
    out << "# x_max: " << fmt17(sol.x_max) << '\n';
    out << "# constant: " << (sol.constant ? "true" : "false") << '\n';
    out << "x,g\n";
    for (std::size_t i = 0; i < sol.x.size(); i += every) out << fmt17(sol.x[i]) << ',' << fmt17(sol.g[i]) << '\n';
    j["slope_at_zero"] = sol.slope_at_zero;
    j["residual"] = sol.residual;
    j["x_max"] = sol.x_max;
    j["constant"] = sol.constant;
    return j;
  } else if (name == "many_to_one") {
    check_keys(p, {"functional", "t", "x0", "rho", "beta", "frame", "replicas", "seed"}, true);
    const auto fit = p.find("functional");
    if (fit == p.end()) throw ConfigError("oracle parameter 'functional' is required");
    const Frame frame = frame_from_string(p.count("frame") ? p.at("frame") : "standard");
    const ModelParams mp = ModelParams::make(param(p, "beta", 1.0), param(p, "rho", 0.0), param(p, "x0", 1.0), frame, law_from(p));
    const ManyToOneResult r =
        many_to_one_check(mp, param(p, "t"), many_to_one_from_string(fit->second),
                          static_cast<std::size_t>(param(p, "replicas", 1000.0)),
                          static_cast<std::uint64_t>(param(p, "seed", 1.0)));
    j["lhs"] = estimate_json(r.lhs);
    j["rhs"] = r.rhs;
    j["ratio"] = r.ratio;
    j["ratio_se"] = r.ratio_se;
  } else {
    throw ConfigError(fmt::format("unknown oracle '{}'; catalog: {}", name, fmt::join(oracle_catalog(), ", ")));
  }
  out << dump(j) << '\n';
  return j;
}

GumbelMixtureFit fit_dataset(const Dataset& dataset, double t, double proxy_time) {
  const std::size_t k = dataset.checkpoint_index(t);
  const std::size_t ks = dataset.checkpoint_index(proxy_time);
  for (const auto& r : dataset.replicas) {
    if (!r.observed(k) || !r.observed(ks) || r.checkpoints[k].survivors == 0) continue;
    if (!r.checkpoints[ks].Z_tilde) throw ConfigError("dataset lacks the Z-proxy field 'Z_tilde'");
    if (!r.checkpoints[k].max_survivors) throw ConfigError("dataset lacks the maximum field 'max_survivors'");
  }
  const auto samples = centered_maxima(dataset, t, proxy_time);
  if (samples.empty()) throw EmptyDataError(fmt::format("no surviving replica at t = {}", t));
  GumbelFitOptions opt;
  opt.z_source = fmt::format("Z_tilde at s = {}", fmt17(proxy_time));
  return gumbel_mixture_fit(samples, dataset.params.lambda_star, opt);
}

Json fit_json(const GumbelMixtureFit& fit, double t, double proxy_time) {
  Json j;
  j["c_hat"] = fit.c_hat;
  j["log_c_hat"] = fit.log_c_hat;
  j["ks"] = fit.ks;
  j["cvm"] = fit.cvm;
  j["n"] = fit.n_used;
  j["n_dropped"] = fit.n_dropped;
  j["lambda_star"] = fit.lambda_star;
  j["t"] = t;
  j["proxy_time"] = proxy_time;
  j["z_source"] = fit.z_source;
  j["method"] = fit.method;
  j["evaluations"] = fit.evaluations;
  return j;
}

namespace {

void write_cdf_table(std::ostream& out, const Json& prov, const std::vector<MaxSample>& samples,
                     const GumbelMixtureFit& fit) {
  std::vector<double> maxima, zs;
  for (const auto& s : samples)
    if (s.z_proxy > 0.0) {
      maxima.push_back(s.centered_max);
      zs.push_back(s.z_proxy);
    }
  std::sort(maxima.begin(), maxima.end());
  out << csv_header_block(prov);
  out << "# c_hat: " << fmt17(fit.c_hat) << "\n# ks: " << fmt17(fit.ks) << '\n';
  out << "z,empirical,model\n";
  const std::size_t stride = std::max<std::size_t>(1, maxima.size() / 2000);
  for (std::size_t i = 0; i < maxima.size(); i += stride)
    out << fmt17(maxima[i]) << ',' << fmt17(static_cast<double>(i + 1) / static_cast<double>(maxima.size()))
        << ',' << fmt17(gumbel_mixture_cdf(maxima[i], fit.c_hat, fit.lambda_star, zs)) << '\n';
}

int cmd_simulate(const std::string& config, const std::vector<std::string>& sets, const std::string& output,
                 const std::string& summary, int threads, std::ostream& out, std::ostream& err, bool progress) {
  ExperimentConfig cfg = resolve_config(config, sets);
  if (!output.empty()) cfg.output = output;
  if (!summary.empty()) cfg.summary = summary;
  if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
  const ExperimentSpec spec = cfg.to_spec();
  ProgressCallback cb;
  if (progress)
    cb = [&](std::size_t done, std::size_t total) {
      if (done == total || done % std::max<std::size_t>(1, total / 20) == 0) err << "replicas " << done << '/' << total << '\n';
    };
  const Dataset d = run_experiment(spec, cb);
  {
    Sink sink(cfg.output, out);
    write_dataset(*sink, cfg, d);
  }
  if (!cfg.summary.empty()) {
    Sink sink(cfg.summary, out);
    write_summary_csv(*sink, cfg, d);
  }
  return 0;
}

struct AnalyzeArgs {
  std::string input;
  std::vector<std::string> analyses;
  std::string report;
  std::string csv_prefix;
  std::optional<double> t, t1, t2, proxy_time;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.analyses.empty()) throw ConfigError("analyze needs at least one --analysis");
  const LoadedDataset loaded = read_dataset_file(a.input);
  const Dataset& d = loaded.dataset;
  Json prov;
  for (const char* k : {"tool", "tool_version", "schema_version", "config_hash", "master_seed"})
    prov[k] = loaded.header.at(k);
  Json report;
  report["provenance"] = prov;
  report["source"] = a.input;
  report["replicas"] = d.replicas.size();
  Json analyses;
  const double horizon = d.checkpoint_times.back();

  auto table = [&](const std::string& name, const std::string& columns, const std::vector<std::string>& rows) {
    if (a.csv_prefix.empty()) return;
    std::ofstream f(a.csv_prefix + name + ".csv", std::ios::binary);
    if (!f) throw ConfigError(fmt::format("cannot write table '{}'", a.csv_prefix + name + ".csv"));
    f << csv_header_block(prov) << columns << '\n';
    for (const auto& r : rows) f << r << '\n';
  };
  auto est_row = [](const Estimate& e) { return fmt::format("{},{},{}", fmt17(e.value), fmt17(e.se), e.n); };

  for (const auto& name : a.analyses) {
    if (name == "survival") {
      Json rows = Json::array();
      std::vector<std::string> csv;
      for (double t : d.checkpoint_times) {
        const Estimate e = survival_prob(d, t);
        Json r = estimate_json(e);
        r["t"] = t;
        rows.push_back(r);
        csv.push_back(fmt17(t) + "," + est_row(e));
      }
      analyses["survival"] = rows;
      table("survival", "t,value,se,n", csv);
    } else if (name == "growth") {
      const double t1 = a.t1.value_or(d.checkpoint_times.front());
      const double t2 = a.t2.value_or(horizon);
      const GrowthRate g = growth_rate(d, t1, t2);
      Json r = estimate_json(g.slope);
      r["t1"] = t1;
      r["t2"] = t2;
      r["lambda_star"] = d.params.lambda_star;
      r["frame"] = to_string(d.params.frame);
      analyses["growth"] = r;
      table("growth", "t1,t2,value,se,n", {fmt17(t1) + "," + fmt17(t2) + "," + est_row(g.slope)});
    } else if (name == "gumbel") {
      const double t = a.t.value_or(horizon);
      const double s = a.proxy_time.value_or(t / 2.0);
      const GumbelMixtureFit fit = fit_dataset(d, t, s);
      analyses["gumbel"] = fit_json(fit, t, s);
      if (!a.csv_prefix.empty()) {
        std::ofstream f(a.csv_prefix + "gumbel_cdf.csv", std::ios::binary);
        write_cdf_table(f, prov, centered_maxima(d, t, s), fit);
      }
    } else if (name == "laplace") {
      if (d.functionals.test_functions.empty()) throw ConfigError("dataset has no 'laplace' values (phi not set)");
      Json rows = Json::array();
      std::vector<std::string> csv;
      for (const auto& phi : d.functionals.test_functions)
        for (double t : d.checkpoint_times) {
          const Estimate e = laplace_functional_estimate(d, phi, t);
          Json r = estimate_json(e);
          r["phi"] = phi.name();
          r["t"] = t;
          rows.push_back(r);
          csv.push_back(phi.name() + "," + fmt17(t) + "," + est_row(e));
        }
      analyses["laplace"] = rows;
      table("laplace", "phi,t,value,se,n", csv);
    } else if (name == "late_touch") {
      if (d.functionals.late_touch_times.empty()) throw ConfigError("dataset has no 'late_touch' values (late_touch_s not set)");
      const double t = a.t.value_or(horizon);
      Json rows = Json::array();
      std::vector<std::string> csv;
      for (double s : d.functionals.late_touch_times) {
        const Estimate e = late_touch_prob(d, s, t);
        Json r = estimate_json(e);
        r["s"] = s;
        r["t"] = t;
        r["A"] = d.functionals.late_touch_window;
        rows.push_back(r);
        csv.push_back(fmt17(s) + "," + fmt17(t) + "," + est_row(e));
      }
      analyses["late_touch"] = rows;
      table("late_touch", "s,t,value,se,n", csv);
    } else if (name == "martingale") {
      Json rows = Json::array();
      std::vector<std::string> csv;
      for (const char* f : {"W", "W_tilde", "Z", "Z_tilde", "V", "V_tilde", "U"})
        for (std::size_t k = 0; k < d.checkpoint_times.size(); ++k) {
          std::vector<double> values;
          try {
            values = functional_values(d, f, k);
          } catch (const StateError&) {
            break;
          }
          if (values.empty()) continue;
          const Estimate e = mean_estimate(values);
          Json r = estimate_json(e);
          r["functional"] = f;
          r["t"] = d.checkpoint_times[k];
          rows.push_back(r);
          csv.push_back(std::string(f) + "," + fmt17(d.checkpoint_times[k]) + "," + est_row(e));
        }
      analyses["martingale"] = rows;
      table("martingale", "functional,t,value,se,n", csv);
    } else {
      throw ConfigError(fmt::format("unknown analysis '{}' (survival, growth, gumbel, laplace, late_touch, martingale)", name));
    }
  }
  report["analyses"] = analyses;
  Sink sink(a.report, out);
  *sink << dump(report) << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Branching Brownian motion with absorption: simulation and analysis"};
  app.name(kToolName);
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string config, output, summary;
  std::vector<std::string> sets;
  int threads = -1;
  bool progress = false;
  auto* sim = app.add_subcommand("simulate", "Run replicas and write a JSON Lines dataset");
  sim->add_option("-c,--config", config, "Config file (key = value)");
  sim->add_option("--set", sets, "Override a config key (key=value)");
  sim->add_option("-o,--output", output, "Dataset path ('-' for stdout)");
  sim->add_option("--summary", summary, "Summary CSV path");
  sim->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sim->add_flag("--progress", progress, "Report progress on stderr");

  AnalyzeArgs an;
  auto* ana = app.add_subcommand("analyze", "Run estimators on a dataset");
  ana->add_option("-i,--input", an.input, "Dataset (JSON Lines)")->required();
  ana->add_option("-a,--analysis", an.analyses,
                  "survival, growth, gumbel, laplace, late_touch, martingale (repeatable)");
  ana->add_option("-r,--report", an.report, "Report JSON path ('-' for stdout)");
  ana->add_option("--csv-prefix", an.csv_prefix, "Prefix for CSV tables");
  ana->add_option("--t", an.t, "Evaluation time (default: horizon)");
  ana->add_option("--t1", an.t1, "Growth window start");
  ana->add_option("--t2", an.t2, "Growth window end");
  ana->add_option("--proxy-time", an.proxy_time, "Z proxy time (default t/2)");

  std::string oracle_name;
  std::vector<std::string> oracle_params;
  auto* ora = app.add_subcommand("oracle", "Evaluate a closed-form or numerical oracle");
  ora->add_option("name", oracle_name, "Oracle name")->required();
  ora->add_option("params", oracle_params, "key=value parameters");

  std::string fit_input, fit_output, fit_table;
  double fit_t = 0.0;
  std::optional<double> fit_s;
  auto* fit = app.add_subcommand("fit", "Fit the Gumbel mixture to a dataset's maxima");
  fit->add_option("-i,--input", fit_input, "Dataset (JSON Lines)")->required();
  fit->add_option("--t", fit_t, "Time of the maxima")->required();
  fit->add_option("--proxy-time", fit_s, "Z proxy time (default t/2)");
  fit->add_option("-o,--output", fit_output, "Fit report JSON ('-' for stdout)");
  fit->add_option("--cdf-table", fit_table, "CSV of empirical vs fitted CDF");

  double dec_t = 6.0;
  std::size_t dec_count = 100, dec_budget = 1'000'000;
  std::uint64_t dec_seed = 1;
  std::string dec_output, dec_config;
  std::vector<std::string> dec_sets;
  auto* dec = app.add_subcommand("decorate", "Sample decorations by conditioning on a high maximum");
  dec->add_option("-c,--config", dec_config, "Config file for beta and the offspring law");
  dec->add_option("--set", dec_sets, "Override a config key (key=value)");
  dec->add_option("--t", dec_t, "Conditioning time");
  dec->add_option("--count", dec_count, "Accepted samples to collect");
  dec->add_option("--budget", dec_budget, "Maximum attempts");
  dec->add_option("--seed", dec_seed, "Master seed");
  dec->add_option("-o,--output", dec_output, "Output JSON ('-' for stdout)");

  double pp_c = 1.0, pp_z = 1.0, pp_ymin = -5.0;
  std::size_t pp_count = 1;
  std::uint64_t pp_seed = 1;
  std::string pp_dec, pp_output, pp_config;
  std::vector<std::string> pp_sets;
  bool pp_max_only = false;
  auto* pp = app.add_subcommand("dppp", "Sample decorated Poisson point processes");
  pp->add_option("-c,--config", pp_config, "Config file for beta and the offspring law");
  pp->add_option("--set", pp_sets, "Override a config key (key=value)");
  pp->add_option("--C", pp_c, "Intensity constant");
  pp->add_option("--Z", pp_z, "Random-shift value Z");
  pp->add_option("--y-min", pp_ymin, "Lower truncation level");
  pp->add_option("--count", pp_count, "Number of samples");
  pp->add_option("--seed", pp_seed, "Master seed");
  pp->add_option("--decorations", pp_dec, "Decoration JSON from 'decorate'");
  pp->add_option("-o,--output", pp_output, "Output JSON Lines ('-' for stdout)");
  pp->add_flag("--max-only", pp_max_only, "Write only counts and maxima");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(config, sets, output, summary, threads, out, err, progress);
    if (*ana) return cmd_analyze(an, out);
    if (*ora) {
      std::map<std::string, std::string> params;
      for (const auto& s : oracle_params) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("oracle parameter '{}' is not key=value", s));
        params[s.substr(0, eq)] = s.substr(eq + 1);
      }
      run_oracle(oracle_name, params, out);
      return 0;
    }
    if (*fit) {
      const LoadedDataset loaded = read_dataset_file(fit_input);
      const double s = fit_s.value_or(fit_t / 2.0);
      const GumbelMixtureFit result = fit_dataset(loaded.dataset, fit_t, s);
      Json prov;
      for (const char* k : {"tool", "tool_version", "schema_version", "config_hash", "master_seed"})
        prov[k] = loaded.header.at(k);
      Json j;
      j["provenance"] = prov;
      j["source"] = fit_input;
      j["fit"] = fit_json(result, fit_t, s);
      {
        Sink sink(fit_output, out);
        *sink << dump(j) << '\n';
      }
      if (!fit_table.empty()) {
        Sink sink(fit_table, out);
        write_cdf_table(*sink, prov, centered_maxima(loaded.dataset, fit_t, s), result);
      }
      return 0;
    }
    if (*dec) {
      ExperimentConfig cfg = resolve_config(dec_config, dec_sets);
      cfg.frame = Frame::NoBarrier;
      cfg.x0 = 0.0;
      cfg.seed = dec_seed;
      const ModelParams mp = ModelParams::make(cfg.beta, 0.0, 0.0, Frame::NoBarrier,
                                               OffspringLaw::from_probabilities(cfg.offspring));
      const DecorationBatch batch = sample_decorations(mp, dec_t, dec_count, dec_budget, dec_seed);
      Json j;
      j["provenance"] = provenance(cfg);
      j["t"] = dec_t;
      j["lambda_star"] = mp.lambda_star;
      j["attempts"] = batch.attempts;
      j["acceptance"] = estimate_json(batch.acceptance);
      Json samples = Json::array();
      for (const auto& s : batch.samples) samples.push_back(Json{{"atoms", s.measure.atoms}});
      j["samples"] = samples;
      Sink sink(dec_output, out);
      *sink << dump(j) << '\n';
      return 0;
    }
    if (*pp) {
      ExperimentConfig cfg = resolve_config(pp_config, pp_sets);
      cfg.seed = pp_seed;
      const double lam = lambda_star(cfg.beta, OffspringLaw::from_probabilities(cfg.offspring));
      std::vector<DecorationSample> pool;
      if (!pp_dec.empty()) {
        std::ifstream f(pp_dec);
        if (!f) throw ConfigError(fmt::format("cannot open decorations '{}'", pp_dec));
        const Json dj = Json::parse(f);
        for (const auto& s : dj.at("samples")) {
          DecorationSample ds;
          ds.measure.atoms = s.at("atoms").get<std::vector<double>>();
          ds.t = dj.at("t").get<double>();
          pool.push_back(std::move(ds));
        }
      }
      const DecorationSampler sampler = pool.empty() ? DecorationSampler{} : pool_sampler(pool);
      Sink sink(pp_output, out);
      Json header = provenance(cfg);
      header["type"] = "header";
      header["C"] = pp_c;
      header["Z"] = pp_z;
      header["y_min"] = pp_ymin;
      header["lambda_star"] = lam;
      header["decorated"] = !pool.empty();
      *sink << dump(header) << '\n';
      for (std::size_t i = 0; i < pp_count; ++i) {
        RandomStream rng(pp_seed, i);
        const PointMeasure m = sample_dppp(pp_c, pp_z, pp_ymin, lam, sampler, rng);
        Json line;
        line["type"] = "dppp";
        line["sample"] = i;
        line["atoms_count"] = m.size();
        line["max"] = m.max() ? Json(*m.max()) : Json(nullptr);
        if (!pp_max_only) line["atoms"] = m.atoms;
        *sink << dump(line) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return 0;
}

}  // namespace abbm::harness
