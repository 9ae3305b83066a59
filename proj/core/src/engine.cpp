#include "abbm/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "abbm/errors.hpp"

namespace abbm {

double bridge_survival_prob(double d1, double d2, double dt) {
  if (!(dt > 0.0)) throw DomainError(fmt::format("bridge duration dt = {} must be positive", dt));
  if (d1 <= 0.0 || d2 <= 0.0) return 0.0;
  return -std::expm1(-2.0 * d1 * d2 / dt);
}

namespace {

// Inverse Gaussian IG(mean, shape) by the transformation-with-multiple-roots
// method; the small root is formed as mean^2 / large root to avoid
// cancellation when mean >> shape.
double sample_inverse_gaussian(double mean, double shape, RandomStream& rng) {
  const double nu = rng.normal();
  const double y = nu * nu;
  const double my = mean * y;
  const double large = mean + mean / (2.0 * shape) * (my + std::sqrt(4.0 * shape * my + my * my));
  const double small = mean * mean / large;
  return rng.uniform() * (mean + small) <= mean ? small : large;
}

}  // namespace

double sample_bridge_first_touch(double d1, double d2, double dt, RandomStream& rng) {
  // Time-changing the bridge, u = s dt / (dt - s), turns it into a free Brownian
  // motion with drift d2/dt started at d1; its hitting time of 0, conditioned
  // on hitting, is inverse Gaussian with mean d1 dt / |d2| and shape d1^2
  // (a Levy variable when d2 = 0).
  double u;
  if (d2 == 0.0) {
    const double nu = rng.normal();
    u = d1 * d1 / (nu * nu);
  } else {
    u = sample_inverse_gaussian(d1 * dt / std::abs(d2), d1 * d1, rng);
  }
  if (!std::isfinite(u)) return dt;
  return u * dt / (dt + u);
}

std::vector<double> uniform_checkpoints(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw DomainError("checkpoint grid needs positive horizon and spacing");
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  std::vector<double> grid;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    if (t > horizon * (1.0 + 1e-12)) break;
    grid.push_back(t);
  }
  if (grid.empty() || std::abs(grid.back() - horizon) > 1e-9 * horizon) grid.push_back(horizon);
  else grid.back() = horizon;
  return grid;
}

bool ReplicaRecord::same_outcome(const ReplicaRecord& o) const {
  return seed == o.seed && barrier_mode == o.barrier_mode && upper_line == o.upper_line &&
         checkpoint_times == o.checkpoint_times && alive_counts == o.alive_counts &&
         created_counts == o.created_counts && snapshots == o.snapshots &&
         barrier_touches == o.barrier_touches && genealogy == o.genealogy &&
         extinction_time == o.extinction_time && saturation_time == o.saturation_time &&
         peak_population == o.peak_population;
}

namespace {

void validate_checkpoints(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("checkpoint grid is empty");
  double prev = 0.0;
  for (double t : grid) {
    if (!std::isfinite(t) || !(t > prev))
      throw DomainError("checkpoint times must be finite, positive and strictly increasing");
    prev = t;
  }
}

struct Walker {
  Particle particle;
  double clock;  // scheduled branching time
};

class Simulation {
 public:
  Simulation(const ModelParams& params, const SimulationOptions& options, SeedMaterial seed)
      : params_(params),
        options_(options),
        rng_(seed),
        drift_(params.motion_drift()),
        slope_(params.barrier_slope()),
        barrier_(params.has_barrier()),
        kill_(options.barrier_mode == BarrierMode::Kill),
        upper_(options.upper_line.has_value()),
        upper_z_(options.upper_line.value_or(0.0)),
        upper_slope_(params.lambda_star + params.motion_drift()) {
    record_.seed = seed;
    record_.params = params;
    record_.barrier_mode = options.barrier_mode;
    record_.upper_line = options.upper_line;
  }

  ReplicaRecord run(const CheckpointObserver& observer) {
    const auto start = std::chrono::steady_clock::now();
    validate_checkpoints(options_.checkpoints);
    if (!(params_.beta >= 0.0)) throw ParameterError("branching rate must be >= 0");
    if (upper_ && !(params_.lambda_star > 0.0))
      throw ParameterError("the upper line needs a branching model with lambda* > 0");

    Particle root;
    root.id = next_id_++;
    root.birth_position = params_.x0;
    root.position = params_.x0;
    if (upper_ && upper_z_ - params_.x0 <= 0.0) {
      root.upper_line_touched = true;
      ++upper_touches_;
    }
    snapshot_.particles.push_back(root);
    clocks_.push_back(lifetime(0.0));
    snapshot_.frame = params_.frame;
    snapshot_.rho = params_.rho;
    snapshot_.lambda_star = params_.lambda_star;
    snapshot_.mode = options_.barrier_mode;
    snapshot_.upper_line = options_.upper_line;

    double t0 = 0.0;
    for (std::size_t k = 0; k < options_.checkpoints.size(); ++k) {
      const double t1 = options_.checkpoints[k];
      run_segment(t0, t1, k);
      t0 = t1;

      snapshot_.time = t1;
      snapshot_.ever_created = next_id_;
      snapshot_.barrier_touches = barrier_touches_;
      snapshot_.upper_line_touches = upper_touches_;
      const std::size_t alive = snapshot_.particles.size();
      record_.checkpoint_times.push_back(t1);
      record_.alive_counts.push_back(alive);
      record_.created_counts.push_back(next_id_);
      record_.peak_population = std::max(record_.peak_population, alive);
      if (observer) observer(k, snapshot_);
      if (options_.keep_snapshots) record_.snapshots.push_back(snapshot_);

      if (alive == 0) {
        record_.extinction_time = t1;
        break;
      }
      if (options_.saturation_count && alive >= *options_.saturation_count) {
        record_.saturation_time = t1;
        break;
      }
    }
    if (options_.record_genealogy)
      for (const Particle& p : snapshot_.particles)
        record_.genealogy.push_back(
            {p.id, p.parent_id, p.birth_time, p.birth_position, t0, p.position, Fate::Alive});

    record_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(record_);
  }

 private:
  double lifetime(double now) {
    return params_.beta > 0.0 ? now + rng_.exponential(params_.beta)
                              : std::numeric_limits<double>::infinity();
  }

  bool crosses(double c1, double c2, double dt) {
    if (c2 <= 0.0) return true;
    if (!(dt > 0.0)) return false;
    return rng_.uniform() < std::exp(-2.0 * c1 * c2 / dt);
  }

  void run_segment(double t0, double t1, std::size_t checkpoint) {
    next_.clear();
    next_clocks_.clear();
    auto& current = snapshot_.particles;
    for (std::size_t i = 0; i < current.size(); ++i) {
      advance(current[i], clocks_[i], t0, t1, checkpoint);
      while (!stack_.empty()) {
        Walker w = std::move(stack_.back());
        stack_.pop_back();
        advance(w.particle, w.clock, w.particle.birth_time, t1, checkpoint);
      }
    }
    current.swap(next_);
    clocks_.swap(next_clocks_);
  }

  void advance(Particle p, double clock, double t, double t1, std::size_t checkpoint) {
    for (;;) {
      const bool branches = clock < t1;
      const double te = branches ? clock : t1;
      const double dt = te - t;
      double xe = p.position;
      if (dt > 0.0) xe += drift_ * dt + std::sqrt(dt) * rng_.normal();

      if (barrier_ && !p.barrier_first_touch) {
        const double c1 = p.position - slope_ * t;
        const double c2 = xe - slope_ * te;
        if (crosses(c1, c2, dt)) {
          const double tau = dt > 0.0 ? t + sample_bridge_first_touch(c1, c2, dt, rng_) : t;
          ++barrier_touches_;
          if (kill_) {
            if (options_.record_genealogy)
              record_.genealogy.push_back({p.id, p.parent_id, p.birth_time, p.birth_position,
                                           tau, slope_ * tau, Fate::Killed});
            return;
          }
          p.barrier_first_touch = tau;
          record_.barrier_touches.push_back({p.id, tau, slope_ * tau});
        }
      }
      if (upper_ && !p.upper_line_touched) {
        const double u1 = upper_z_ + upper_slope_ * t - p.position;
        const double u2 = upper_z_ + upper_slope_ * te - xe;
        if (crosses(u1, u2, dt)) {
          p.upper_line_touched = true;
          ++upper_touches_;
        }
      }
      p.position = xe;
      t = te;

      if (!branches) {
        next_.push_back(std::move(p));
        next_clocks_.push_back(clock);
        check_cap(checkpoint);
        return;
      }

      const int children = params_.law.sample(rng_);
      if (options_.record_genealogy)
        record_.genealogy.push_back(
            {p.id, p.parent_id, p.birth_time, p.birth_position, te, xe, Fate::Branched});
      const std::uint64_t parent = p.id;
      p.parent_id = parent;
      p.birth_time = te;
      p.birth_position = xe;
      for (int j = 1; j < children; ++j) {
        Particle child = p;
        child.id = next_id_++;
        stack_.push_back({std::move(child), lifetime(te)});
      }
      p.id = next_id_++;
      clock = lifetime(te);
      check_cap(checkpoint);
    }
  }

  void check_cap(std::size_t checkpoint) const {
    if (next_.size() + stack_.size() > options_.population_cap)
      throw ResourceError(
          fmt::format("population cap {} exceeded before checkpoint {} (t = {})",
                      options_.population_cap, checkpoint, options_.checkpoints[checkpoint]),
          checkpoint);
  }

  const ModelParams& params_;
  const SimulationOptions& options_;
  RandomStream rng_;
  const double drift_;
  const double slope_;
  const bool barrier_;
  const bool kill_;
  const bool upper_;
  const double upper_z_;
  const double upper_slope_;

  ReplicaRecord record_;
  PopulationSnapshot snapshot_;
  std::vector<double> clocks_;
  std::vector<Particle> next_;
  std::vector<double> next_clocks_;
  std::vector<Walker> stack_;
  std::uint64_t next_id_ = 0;
  std::uint64_t barrier_touches_ = 0;
  std::uint64_t upper_touches_ = 0;
};

}  // namespace

ReplicaRecord simulate_replica(const ModelParams& params, const SimulationOptions& options,
                               SeedMaterial seed, const CheckpointObserver& observer) {
  Simulation sim(params, options, seed);
  return sim.run(observer);
}

std::vector<BarrierTouch> stopping_line_crossers(const ReplicaRecord& record) {
  if (record.barrier_mode != BarrierMode::Tag)
    throw StateError("stopping-line crossers are only kept by tag-mode runs");
  return record.barrier_touches;
}

std::vector<Particle> branch(Particle& parent, double time, const OffspringLaw& law,
                             RandomStream& rng, std::uint64_t& next_id) {
  const int k = law.sample(rng);
  std::vector<Particle> children;
  children.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    Particle child = parent;
    child.id = next_id++;
    child.parent_id = parent.id;
    child.birth_time = time;
    child.birth_position = parent.position;
    child.alive = true;
    children.push_back(std::move(child));
  }
  parent.alive = false;
  return children;
}

}  // namespace abbm
