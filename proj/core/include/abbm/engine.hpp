#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "abbm/model.hpp"
#include "abbm/particles.hpp"
#include "abbm/rng.hpp"

namespace abbm {

/// Probability that a Brownian bridge with endpoint clearances d1, d2 above a
/// straight line over duration dt stays strictly above it:
/// 1 - exp(-2 d1 d2 / dt), and 0 if either endpoint is on or below the line.
double bridge_survival_prob(double d1, double d2, double dt);

/// Given that a Brownian bridge from clearance d1 > 0 to clearance d2 over
/// [0, dt] touches the line, draws the first touch time (relative to the
/// bridge start) from its exact conditional law.
double sample_bridge_first_touch(double d1, double d2, double dt, RandomStream& rng);

struct SimulationOptions {
  /// Strictly increasing, positive. Positions are sampled at these times and at
  /// branching events; crossings in between are resolved exactly.
  std::vector<double> checkpoints;
  BarrierMode barrier_mode = BarrierMode::Kill;
  /// Level z of the tag-only upper line z + (lambda* + drift) s.
  std::optional<double> upper_line;
  std::size_t population_cap = 10'000'000;
  /// Stop early, counting the replica as surviving, once a checkpoint has at
  /// least this many alive particles. Off by default.
  std::optional<std::size_t> saturation_count;
  bool keep_snapshots = false;
  bool record_genealogy = false;
};

/// Uniform grid dt, 2dt, ... up to and including horizon.
std::vector<double> uniform_checkpoints(double horizon, double dt);

struct BarrierTouch {
  std::uint64_t particle_id = 0;
  double time = 0.0;
  /// Barrier position at the touch, in the native frame.
  double position = 0.0;

  friend bool operator==(const BarrierTouch&, const BarrierTouch&) = default;
};

enum class Fate { Branched, Killed, Alive };

struct GenealogyEntry {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent_id;
  double birth_time = 0.0;
  double birth_position = 0.0;
  double end_time = 0.0;
  double end_position = 0.0;
  Fate fate = Fate::Alive;

  friend bool operator==(const GenealogyEntry&, const GenealogyEntry&) = default;
};

struct ReplicaRecord {
  SeedMaterial seed;
  ModelParams params;
  BarrierMode barrier_mode = BarrierMode::Kill;
  std::optional<double> upper_line;
  /// Checkpoints actually reached (a prefix of the requested grid).
  std::vector<double> checkpoint_times;
  std::vector<std::size_t> alive_counts;
  std::vector<std::uint64_t> created_counts;
  std::vector<PopulationSnapshot> snapshots;
  /// Lineage-first barrier touches (tag mode only).
  std::vector<BarrierTouch> barrier_touches;
  std::vector<GenealogyEntry> genealogy;
  /// Checkpoint at which the alive set emptied.
  std::optional<double> extinction_time;
  /// Checkpoint at which saturation_count was reached.
  std::optional<double> saturation_time;
  std::size_t peak_population = 0;
  double wall_seconds = 0.0;

  /// Equality of everything except wall time.
  bool same_outcome(const ReplicaRecord& other) const;
};

using CheckpointObserver = std::function<void(std::size_t index, const PopulationSnapshot&)>;

/// Simulates one replica from a single particle at params.x0. The observer,
/// if any, sees the alive set at every reached checkpoint. Throws
/// ResourceError when the population exceeds the cap and DomainError for an
/// invalid checkpoint grid.
ReplicaRecord simulate_replica(const ModelParams& params, const SimulationOptions& options,
                               SeedMaterial seed, const CheckpointObserver& observer = {});

/// (particle id, touch time, barrier position) for every lineage-first touch.
/// Throws StateError for kill-mode records.
std::vector<BarrierTouch> stopping_line_crossers(const ReplicaRecord& record);

/// Replaces an alive parent with L i.i.d. children at its position. Children
/// inherit the lineage flags and take ids next_id, next_id + 1, ...
std::vector<Particle> branch(Particle& parent, double time, const OffspringLaw& law,
                             RandomStream& rng, std::uint64_t& next_id);

}  // namespace abbm
