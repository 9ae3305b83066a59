#include "abbm/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "abbm/errors.hpp"
#include "abbm/stats.hpp"

namespace abbm {

namespace {

void require_full_population(const PopulationSnapshot& snapshot, Restriction restrict,
                             const char* what) {
  if (restrict == Restriction::All && snapshot.mode == BarrierMode::Kill &&
      snapshot.frame != Frame::NoBarrier)
    throw StateError(std::string(what) +
                     " over N_t needs a tag-mode run: kill mode discards absorbed lineages");
}

double weight(const PopulationSnapshot& s, double x_std) {
  const double lam = s.lambda_star;
  return std::exp(lam * (x_std - lam * s.time));
}

bool touched_by(const Particle& p, double s) {
  return p.barrier_first_touch.has_value() && *p.barrier_first_touch <= s;
}

}  // namespace

std::optional<double> PointMeasure::max() const {
  if (atoms.empty()) return std::nullopt;
  return *std::max_element(atoms.begin(), atoms.end());
}

double PointMeasure::integrate(const TestFunction& phi) const {
  NeumaierSum sum;
  for (double a : atoms) sum.add(phi(a));
  return sum.value();
}

bool in_restriction(const PopulationSnapshot& snapshot, const Particle& p, Restriction restrict) {
  if (!p.alive) return false;
  if (restrict == Restriction::All) return true;
  return !p.barrier_first_touch.has_value() || snapshot.frame == Frame::NoBarrier;
}

double additive_W(const PopulationSnapshot& snapshot, Restriction restrict) {
  require_full_population(snapshot, restrict, "W");
  NeumaierSum sum;
  for (const auto& p : snapshot.particles)
    if (in_restriction(snapshot, p, restrict)) sum.add(weight(snapshot, snapshot.standard_position(p)));
  return sum.value();
}

double derivative_Z(const PopulationSnapshot& snapshot, Restriction restrict) {
  require_full_population(snapshot, restrict, "Z");
  const double lt = snapshot.lambda_star * snapshot.time;
  NeumaierSum sum;
  for (const auto& p : snapshot.particles) {
    if (!in_restriction(snapshot, p, restrict)) continue;
    const double x = snapshot.standard_position(p);
    sum.add((lt - x) * weight(snapshot, x));
  }
  return sum.value();
}

double truncated_V(const PopulationSnapshot& snapshot, double z, Restriction restrict) {
  require_full_population(snapshot, restrict, "V");
  if (!snapshot.upper_line || *snapshot.upper_line != z)
    throw StateError("V^z needs a run that tracked the upper line with the same z");
  const double top = z + snapshot.lambda_star * snapshot.time;
  NeumaierSum sum;
  for (const auto& p : snapshot.particles) {
    if (!in_restriction(snapshot, p, restrict) || p.upper_line_touched) continue;
    const double x = snapshot.standard_position(p);
    sum.add(std::max(top - x, 0.0) * weight(snapshot, x));
  }
  return sum.value();
}

double gap_U(double v_value, double v_tilde_value) {
  const double u = v_value - v_tilde_value;
  const double scale = std::max({std::abs(v_value), std::abs(v_tilde_value), 1.0});
  if (u < -1e-9 * scale)
    throw NumericError("U^z = V^z - V~^z came out negative beyond round-off");
  return std::max(u, 0.0);
}

double truncated_Z_s(const PopulationSnapshot& snapshot, double s) {
  require_full_population(snapshot, Restriction::All, "Z^s");
  const double lt = snapshot.lambda_star * snapshot.time;
  NeumaierSum sum;
  for (const auto& p : snapshot.particles) {
    if (!p.alive || touched_by(p, s)) continue;
    const double x = snapshot.standard_position(p);
    sum.add((lt - x) * weight(snapshot, x));
  }
  return sum.value();
}

PointMeasure extremal_measure(const PopulationSnapshot& snapshot, ExtremalMode mode) {
  if (mode.truncation_time) require_full_population(snapshot, Restriction::All, "e^s_t");
  const double m = centering(snapshot.time, snapshot.lambda_star, 0.0);
  PointMeasure out;
  out.atoms.reserve(snapshot.particles.size());
  for (const auto& p : snapshot.particles) {
    if (!p.alive) continue;
    const bool keep = mode.truncation_time ? !touched_by(p, *mode.truncation_time)
                                           : in_restriction(snapshot, p, Restriction::BarrierSurvivors);
    if (keep) out.atoms.push_back(snapshot.standard_position(p) - m);
  }
  return out;
}

double laplace(const PointMeasure& measure, const TestFunction& phi) {
  return std::exp(-measure.integrate(phi));
}

std::optional<double> max_position(const PopulationSnapshot& snapshot, Restriction restrict) {
  require_full_population(snapshot, restrict, "max");
  std::optional<double> best;
  for (const auto& p : snapshot.particles)
    if (in_restriction(snapshot, p, restrict) && (!best || p.position > *best)) best = p.position;
  return best;
}

CheckpointValues evaluate_checkpoint(const PopulationSnapshot& snapshot,
                                     const FunctionalRequest& request) {
  CheckpointValues v;
  v.time = snapshot.time;
  v.alive = snapshot.alive_count();
  v.ever_created = snapshot.ever_created;
  for (const auto& p : snapshot.particles)
    if (in_restriction(snapshot, p, Restriction::BarrierSurvivors)) ++v.survivors;

  const bool full = snapshot.mode == BarrierMode::Tag || snapshot.frame == Frame::NoBarrier;
  if (snapshot.upper_line) v.upper_line_untouched = snapshot.upper_line_touches == 0;

  v.W_tilde = additive_W(snapshot, Restriction::BarrierSurvivors);
  v.Z_tilde = derivative_Z(snapshot, Restriction::BarrierSurvivors);
  v.max_survivors = max_position(snapshot, Restriction::BarrierSurvivors);
  if (full) {
    v.W = additive_W(snapshot, Restriction::All);
    v.Z = derivative_Z(snapshot, Restriction::All);
    v.max_all = max_position(snapshot, Restriction::All);
  }
  if (request.upper_line) {
    v.V_tilde = truncated_V(snapshot, *request.upper_line, Restriction::BarrierSurvivors);
    if (full) {
      v.V = truncated_V(snapshot, *request.upper_line, Restriction::All);
      v.U = gap_U(*v.V, *v.V_tilde);
    }
  }
  if (full) {
    for (double s : request.truncation_times) v.Z_s.push_back(truncated_Z_s(snapshot, s));
  }

  if (!request.test_functions.empty() || !request.late_touch_times.empty()) {
    if (snapshot.time <= 0.0) throw DomainError("extremal functionals need t > 0");
    const PointMeasure e = extremal_measure(snapshot);
    for (const auto& phi : request.test_functions) v.laplace.push_back(laplace(e, phi));

    const double threshold =
        centering(snapshot.time, snapshot.lambda_star, 0.0) - request.late_touch_window;
    for (double s : request.late_touch_times) {
      bool hit = false;
      if (s <= snapshot.time) {
        for (const auto& p : snapshot.particles) {
          if (p.alive && p.barrier_first_touch && *p.barrier_first_touch >= s &&
              snapshot.standard_position(p) >= threshold) {
            hit = true;
            break;
          }
        }
      }
      v.late_touch.push_back(hit);
    }
  }
  return v;
}

}  // namespace abbm
