#include "abbm/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "abbm/errors.hpp"

namespace abbm {

namespace {

CheckpointValues after_extinction(const CheckpointValues& last, double time) {
  CheckpointValues v = last;
  v.time = time;
  std::fill(v.late_touch.begin(), v.late_touch.end(), false);
  return v;
}

const CheckpointValues& at(const ReplicaSummary& r, std::size_t k) { return r.checkpoints[k]; }

std::size_t find_test_function(const Dataset& dataset, const TestFunction& phi) {
  const auto& fs = dataset.functionals.test_functions;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (fs[i] == phi) return i;
  throw DomainError(fmt::format("test function '{}' was not evaluated in this dataset", phi.name()));
}

}  // namespace

bool ReplicaSummary::alive_at(std::size_t k) const noexcept {
  if (k < checkpoints.size()) return checkpoints[k].survivors > 0;
  return saturation_time.has_value();
}

std::size_t Dataset::checkpoint_index(double t) const {
  for (std::size_t k = 0; k < checkpoint_times.size(); ++k)
    if (std::abs(checkpoint_times[k] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return k;
  throw DomainError(fmt::format("no checkpoint at t = {} in this dataset", t));
}

ReplicaSummary run_replica(const ExperimentSpec& spec, std::size_t index) {
  ReplicaSummary s;
  s.index = index;
  s.seed = SeedMaterial{spec.master_seed, index};
  std::uint64_t touches = 0;
  ReplicaRecord record;
  try {
    record = simulate_replica(spec.params, spec.options, s.seed,
                              [&](std::size_t, const PopulationSnapshot& snap) {
                                s.checkpoints.push_back(evaluate_checkpoint(snap, spec.functionals));
                                touches = snap.barrier_touches;
                              });
  } catch (const ResourceError& e) {
    throw ResourceError(fmt::format("replica {}: {}", index, e.what()), e.checkpoint_index(), index);
  }
  s.extinction_time = record.extinction_time;
  s.saturation_time = record.saturation_time;
  s.peak_population = record.peak_population;
  s.barrier_touches = touches;
  if (record.extinction_time && !s.checkpoints.empty()) {
    const CheckpointValues last = s.checkpoints.back();
    for (std::size_t k = s.checkpoints.size(); k < spec.options.checkpoints.size(); ++k)
      s.checkpoints.push_back(after_extinction(last, spec.options.checkpoints[k]));
  }
  if (spec.keep_records) s.record = std::move(record);
  return s;
}

Dataset run_experiment(const ExperimentSpec& spec, const ProgressCallback& progress) {
  if (spec.replicas == 0) throw ParameterError("an experiment needs at least one replica");
  Dataset d;
  d.params = spec.params;
  d.mode = spec.options.barrier_mode;
  d.upper_line = spec.options.upper_line;
  d.checkpoint_times = spec.options.checkpoints;
  d.functionals = spec.functionals;
  d.master_seed = spec.master_seed;
  d.replicas.resize(spec.replicas);

  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.replicas)));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::size_t error_index = spec.replicas;
  std::mutex mu;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.replicas || failed.load()) return;
      try {
        d.replicas[i] = run_replica(spec, i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < error_index) {
          error = std::current_exception();
          error_index = i;
        }
        failed = true;
        return;
      }
      const std::size_t n = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(mu);
        progress(n, spec.replicas);
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return d;
}

Estimate survival_prob(const Dataset& dataset, double t) {
  if (dataset.replicas.empty()) throw EmptyDataError("survival estimate on an empty dataset");
  const std::size_t k = dataset.checkpoint_index(t);
  std::size_t alive = 0;
  for (const auto& r : dataset.replicas) alive += r.alive_at(k) ? 1 : 0;
  return proportion_estimate(alive, dataset.replicas.size());
}

GrowthRate growth_rate(const Dataset& dataset, double t1, double t2) {
  if (!(t2 > t1)) throw DomainError("growth-rate window needs t2 > t1");
  std::vector<std::size_t> ks;
  for (std::size_t k = 0; k < dataset.checkpoint_times.size(); ++k) {
    const double t = dataset.checkpoint_times[k];
    if (t >= t1 - 1e-9 && t <= t2 + 1e-9) ks.push_back(k);
  }
  if (ks.size() < 2) throw DomainError("growth-rate window holds fewer than two checkpoints");
  Accumulator acc;
  std::vector<double> x, y;
  for (const auto& r : dataset.replicas) {
    if (!r.observed(ks.back()) || !r.alive_at(ks.back())) continue;
    x.clear();
    y.clear();
    for (std::size_t k : ks) {
      x.push_back(dataset.checkpoint_times[k]);
      y.push_back(*at(r, k).max_survivors);
    }
    acc.add(least_squares_slope(x, y));
  }
  if (acc.count() == 0) throw EmptyDataError("no replica survives the growth-rate window");
  return {acc.estimate(), acc.count()};
}

Estimate laplace_functional_estimate(const Dataset& dataset, const TestFunction& phi, double t) {
  const std::size_t k = dataset.checkpoint_index(t);
  const std::size_t j = find_test_function(dataset, phi);
  Accumulator acc;
  for (const auto& r : dataset.replicas)
    if (r.observed(k)) acc.add(at(r, k).laplace[j]);
  if (acc.count() == 0) throw EmptyDataError("no replica observed at the Laplace checkpoint");
  return acc.estimate();
}

Estimate late_touch_prob(const Dataset& dataset, double s, double t) {
  if (dataset.mode != BarrierMode::Tag || !dataset.params.has_barrier())
    throw StateError("late-touch probability needs a tag-mode run with barrier touch times");
  if (s > t) return proportion_estimate(0, dataset.replicas.size());
  const std::size_t k = dataset.checkpoint_index(t);
  const auto& times = dataset.functionals.late_touch_times;
  const auto it = std::find_if(times.begin(), times.end(), [&](double v) { return std::abs(v - s) <= 1e-12; });
  if (it == times.end()) throw DomainError(fmt::format("late-touch time s = {} was not requested", s));
  const auto j = static_cast<std::size_t>(it - times.begin());
  std::size_t hits = 0, n = 0;
  for (const auto& r : dataset.replicas) {
    if (!r.observed(k)) continue;
    ++n;
    hits += at(r, k).late_touch[j] ? 1 : 0;
  }
  if (n == 0) throw EmptyDataError("no replica observed at the late-touch checkpoint");
  return proportion_estimate(hits, n);
}

std::vector<double> functional_values(const Dataset& dataset, const std::string& name, std::size_t k) {
  std::vector<double> out;
  out.reserve(dataset.replicas.size());
  for (const auto& r : dataset.replicas) {
    if (!r.observed(k)) continue;
    const CheckpointValues& v = at(r, k);
    std::optional<double> x;
    if (name == "W") x = v.W;
    else if (name == "W_tilde") x = v.W_tilde;
    else if (name == "Z") x = v.Z;
    else if (name == "Z_tilde") x = v.Z_tilde;
    else if (name == "V") x = v.V;
    else if (name == "V_tilde") x = v.V_tilde;
    else if (name == "U") x = v.U;
    else if (name == "alive") x = static_cast<double>(v.alive);
    else if (name == "survivors") x = static_cast<double>(v.survivors);
    else if (name == "max_survivors") x = v.max_survivors;
    else if (name == "max_all") x = v.max_all;
    else throw DomainError(fmt::format("unknown functional '{}'", name));
    if (!x) {
      if (name.rfind("max", 0) == 0) continue;
      throw StateError(fmt::format("functional '{}' is not available in this dataset", name));
    }
    out.push_back(*x);
  }
  return out;
}

Estimate functional_mean(const Dataset& dataset, const std::string& name, double t) {
  const auto values = functional_values(dataset, name, dataset.checkpoint_index(t));
  if (values.empty()) throw EmptyDataError(fmt::format("no values of '{}' at t = {}", name, t));
  return mean_estimate(values);
}

std::vector<MaxSample> centered_maxima(const Dataset& dataset, double t, double proxy_time) {
  const std::size_t k = dataset.checkpoint_index(t);
  const std::size_t ks = dataset.checkpoint_index(proxy_time);
  const double m = centering(t, dataset.params);
  std::vector<MaxSample> out;
  for (const auto& r : dataset.replicas) {
    if (!r.observed(k) || !r.observed(ks) || !at(r, k).max_survivors) continue;
    out.push_back({*at(r, k).max_survivors - m, *at(r, ks).Z_tilde});
  }
  return out;
}

}  // namespace abbm
