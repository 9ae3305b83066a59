#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "abbm/model.hpp"

namespace abbm {

enum class BarrierMode {
  /// Particles touching the barrier are removed.
  Kill,
  /// Touches are recorded as a lineage flag and the particle keeps moving.
  Tag,
};

std::string to_string(BarrierMode mode);
BarrierMode barrier_mode_from_string(const std::string& name);

struct Particle {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent_id;
  double birth_time = 0.0;
  double birth_position = 0.0;
  double position = 0.0;
  /// First time the lineage touched the barrier, inherited by descendants.
  std::optional<double> barrier_first_touch;
  /// Whether the lineage ever touched the upper line z + lambda* s.
  bool upper_line_touched = false;
  bool alive = true;

  friend bool operator==(const Particle&, const Particle&) = default;
};

/// The alive set at a checkpoint, with everything needed to interpret the
/// positions (frame, barrier slope, speed, tracking mode).
struct PopulationSnapshot {
  double time = 0.0;
  Frame frame = Frame::StandardWithMovingBarrier;
  double rho = 0.0;
  double lambda_star = 0.0;
  BarrierMode mode = BarrierMode::Kill;
  std::optional<double> upper_line;
  std::vector<Particle> particles;
  std::uint64_t ever_created = 0;
  /// Cumulative number of lineage-first touches of each line up to `time`.
  std::uint64_t barrier_touches = 0;
  std::uint64_t upper_line_touches = 0;

  /// Set by frame_shift to the snapshot it was shifted from; the inverse shift
  /// hands that snapshot back unchanged. Not part of equality.
  std::shared_ptr<const PopulationSnapshot> shifted_from;

  std::size_t alive_count() const noexcept { return particles.size(); }

  /// Position of particle i in the standard (driftless, moving-barrier) frame.
  double standard_position(const Particle& p) const noexcept {
    return frame == Frame::DriftedAbsorbedAtZero ? p.position + rho * time : p.position;
  }

  friend bool operator==(const PopulationSnapshot& a, const PopulationSnapshot& b) {
    return a.time == b.time && a.frame == b.frame && a.rho == b.rho &&
           a.lambda_star == b.lambda_star && a.mode == b.mode && a.upper_line == b.upper_line &&
           a.particles == b.particles && a.ever_created == b.ever_created &&
           a.barrier_touches == b.barrier_touches &&
           a.upper_line_touches == b.upper_line_touches;
  }
};

enum class ShiftDirection { StandardToDrifted, DriftedToStandard };

/// Moves every position by -rho t (standard -> drifted) or +rho t (reverse),
/// and birth positions by the same amount evaluated at their birth times.
/// Shifting back returns the original snapshot exactly.
PopulationSnapshot frame_shift(const PopulationSnapshot& snapshot, double t, ShiftDirection direction);

}  // namespace abbm
