#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "abbm/engine.hpp"
#include "abbm/functionals.hpp"
#include "abbm/model.hpp"
#include "abbm/stats.hpp"

namespace abbm {

struct ExperimentSpec {
  ModelParams params;
  SimulationOptions options;
  FunctionalRequest functionals;
  std::size_t replicas = 1;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  /// Keep the full ReplicaRecord of every replica (memory heavy).
  bool keep_records = false;
};

/// Per-replica outcome: functional values at every checkpoint the run reached.
/// Checkpoints after extinction are filled with the empty-population values;
/// checkpoints after saturation are absent (observed() is false).
struct ReplicaSummary {
  std::size_t index = 0;
  SeedMaterial seed;
  std::vector<CheckpointValues> checkpoints;
  std::optional<double> extinction_time;
  std::optional<double> saturation_time;
  std::size_t peak_population = 0;
  std::uint64_t barrier_touches = 0;
  std::optional<ReplicaRecord> record;

  bool observed(std::size_t k) const noexcept { return k < checkpoints.size(); }
  /// Non-empty alive set at checkpoint k; saturated replicas count as alive.
  bool alive_at(std::size_t k) const noexcept;
};

struct Dataset {
  ModelParams params;
  BarrierMode mode = BarrierMode::Kill;
  std::optional<double> upper_line;
  std::vector<double> checkpoint_times;
  FunctionalRequest functionals;
  std::uint64_t master_seed = 0;
  std::vector<ReplicaSummary> replicas;

  /// Index of checkpoint t (matched to 1e-9); DomainError if absent.
  std::size_t checkpoint_index(double t) const;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Runs replicas 0..N-1 with seeds (master_seed, i). The result is ordered by
/// replica index and does not depend on the thread count. Engine resource
/// errors are rethrown with the replica index attached.
Dataset run_experiment(const ExperimentSpec& spec, const ProgressCallback& progress = {});

/// Simulates replica `index` of an experiment and evaluates its functionals.
ReplicaSummary run_replica(const ExperimentSpec& spec, std::size_t index);

/// Fraction alive at t with binomial SE (an upper-bound proxy for survival).
Estimate survival_prob(const Dataset& dataset, double t);

struct GrowthRate {
  Estimate slope;
  std::size_t survivors = 0;
};

/// Mean over replicas alive at t2 of the least-squares slope of the native-frame
/// barrier-survivor maximum over checkpoints in [t1, t2].
GrowthRate growth_rate(const Dataset& dataset, double t1, double t2);

/// Mean of exp(-<e_t, phi>) over replicas; phi must be one of the dataset's
/// test functions. Extinct replicas contribute 1.
Estimate laplace_functional_estimate(const Dataset& dataset, const TestFunction& phi, double t);

/// Fraction of replicas with a lineage touching the barrier in [s, t] and
/// standing at least m_t - A at t. s must be one of the requested times.
Estimate late_touch_prob(const Dataset& dataset, double s, double t);

/// Per-replica value of a named scalar functional at checkpoint k over the
/// observed replicas: "W", "W_tilde", "Z", "Z_tilde", "V", "V_tilde", "U",
/// "alive", "survivors", "max_survivors", "max_all".
std::vector<double> functional_values(const Dataset& dataset, const std::string& name, std::size_t k);

/// Mean with SE of functional_values.
Estimate functional_mean(const Dataset& dataset, const std::string& name, double t);

/// (centered maximum at t, Z~ proxy at s) over replicas alive at t, where the
/// maximum is the native-frame survivor maximum minus the frame's centering.
struct MaxSample {
  double centered_max = 0.0;
  double z_proxy = 0.0;
};
std::vector<MaxSample> centered_maxima(const Dataset& dataset, double t, double proxy_time);

}  // namespace abbm
