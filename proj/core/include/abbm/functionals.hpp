#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abbm/model.hpp"
#include "abbm/particles.hpp"

namespace abbm {

/// Finite multiset of real atoms.
struct PointMeasure {
  std::vector<double> atoms;

  std::size_t size() const noexcept { return atoms.size(); }
  bool empty() const noexcept { return atoms.empty(); }
  std::optional<double> max() const;
  /// <measure, phi> = sum of phi over the atoms.
  double integrate(const TestFunction& phi) const;

  friend bool operator==(const PointMeasure&, const PointMeasure&) = default;
};

/// Which particles a functional sums over.
enum class Restriction {
  /// N_t: every particle of the underlying branching process (tag mode or no
  /// barrier only).
  All,
  /// N~_t: lineages that never touched the barrier.
  BarrierSurvivors,
};

// Functionals are evaluated on standard-frame positions (drifted snapshots are
// converted internally) with weight e^{lambda*(X - lambda* t)}. Summation is
// compensated. Restriction::All on a kill-mode snapshot is a StateError.

double additive_W(const PopulationSnapshot& snapshot, Restriction restrict);
double derivative_Z(const PopulationSnapshot& snapshot, Restriction restrict);

/// Sum over lineages that stayed below z + lambda* s (and, when restricted,
/// above the barrier) of (z + lambda* t - X) e^{lambda*(X - lambda* t)}.
/// The snapshot must come from a run tracking the same upper line z.
double truncated_V(const PopulationSnapshot& snapshot, double z, Restriction restrict);

/// V - V~; throws NumericError if the difference is below -1e-9 (relative).
double gap_U(double v_value, double v_tilde_value);

/// Sum of derivative weights over lineages whose first barrier touch is
/// absent or later than s. For t <= s this is Z~_t.
double truncated_Z_s(const PopulationSnapshot& snapshot, double s);

struct ExtremalMode {
  /// Unset: e_t over barrier survivors. Set: e^s_t over lineages untouched by s.
  std::optional<double> truncation_time;
};

/// Atoms X_u(t) - m_t in standard-frame coordinates. Throws DomainError for
/// t <= 0.
PointMeasure extremal_measure(const PopulationSnapshot& snapshot, ExtremalMode mode = {});

/// exp(-<measure, phi>), in (0, 1].
double laplace(const PointMeasure& measure, const TestFunction& phi);

/// Maximum position in the snapshot's own frame; nullopt when empty.
std::optional<double> max_position(const PopulationSnapshot& snapshot, Restriction restrict);

/// Whether a particle belongs to the selected set.
bool in_restriction(const PopulationSnapshot& snapshot, const Particle& p, Restriction restrict);

/// What to compute at each checkpoint of a replica.
struct FunctionalRequest {
  /// z for V^z, V~^z, U^z (run must track this upper line).
  std::optional<double> upper_line;
  /// s values for Z^s_t.
  std::vector<double> truncation_times;
  /// Test functions for exp(-<e_t, phi>) over barrier survivors.
  std::vector<TestFunction> test_functions;
  /// s values and window A for the late-touch indicator
  /// 1{exists u: tau(u) in [s, t], X_u(t) >= m_t - A}.
  std::vector<double> late_touch_times;
  double late_touch_window = 2.0;
};

/// Per-checkpoint functional values of one replica. Entries that a run cannot
/// provide (e.g. unrestricted sums in kill mode) are nullopt.
struct CheckpointValues {
  double time = 0.0;
  std::size_t alive = 0;
  std::size_t survivors = 0;
  std::uint64_t ever_created = 0;
  /// No lineage has touched the upper line up to this time.
  std::optional<bool> upper_line_untouched;
  std::optional<double> W, W_tilde, Z, Z_tilde;
  std::optional<double> V, V_tilde, U;
  std::vector<double> Z_s;
  /// Maxima in the native frame.
  std::optional<double> max_all, max_survivors;
  std::vector<double> laplace;
  std::vector<bool> late_touch;
};

CheckpointValues evaluate_checkpoint(const PopulationSnapshot& snapshot,
                                     const FunctionalRequest& request);

/// Named per-checkpoint series of one functional.
struct FunctionalTrajectory {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
};

}  // namespace abbm
