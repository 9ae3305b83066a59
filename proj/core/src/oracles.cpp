#include "abbm/oracles.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "abbm/engine.hpp"
#include "abbm/errors.hpp"

namespace abbm {

namespace {

/// log Phi(a), accurate in the far left tail.
double log_normal_cdf(double a) {
  if (a > -30.0) return std::log(normal_cdf(a));
  const double a2 = a * a;
  const double series = 1.0 - 1.0 / a2 + 3.0 / (a2 * a2) - 15.0 / (a2 * a2 * a2);
  return -0.5 * a2 - std::log(-a) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

/// e^{c} Phi(a) without overflow in e^{c}.
double scaled_normal_cdf(double c, double a) { return std::exp(c + log_normal_cdf(a)); }

}  // namespace

LineHit hit_prob_line(double y, double mu) {
  if (!(y >= 0.0)) throw DomainError("hit_prob_line needs a nonnegative clearance y");
  if (mu <= 0.0) return {1.0, 0.0, true};
  const double stay = -std::expm1(-2.0 * y * mu);
  return {std::exp(-2.0 * y * mu), stay, false};
}

double hitting_time_density(double x, double rho, double r) {
  if (!(x > 0.0)) throw DomainError("hitting_time_density needs a start x > 0");
  if (!(r > 0.0)) throw DomainError("hitting_time_density needs a time r > 0");
  const double d = x - rho * r;
  return x / std::sqrt(2.0 * std::numbers::pi * r * r * r) * std::exp(-d * d / (2.0 * r));
}

double hitting_time_cdf(double x, double rho, double r) {
  if (!(x > 0.0)) throw DomainError("hitting_time_cdf needs a start x > 0");
  if (r <= 0.0) return 0.0;
  const double sr = std::sqrt(r);
  const double p = normal_cdf((-x + rho * r) / sr) + scaled_normal_cdf(2.0 * rho * x, (-x - rho * r) / sr);
  return std::min(p, 1.0);
}

double stay_above_line(double x, double rho, double t) {
  if (x <= 0.0) return 0.0;
  return std::max(0.0, 1.0 - hitting_time_cdf(x, rho, t));
}

double hitting_time_mean(double x, double mu) {
  if (!(x > 0.0)) throw DomainError("hitting_time_mean needs a start x > 0");
  if (!(mu > 0.0)) throw DomainError("hitting_time_mean needs mu > 0: the mean is infinite otherwise");
  return x / mu;
}

std::string to_string(ManyToOneFunctional f) {
  switch (f) {
    case ManyToOneFunctional::One: return "one";
    case ManyToOneFunctional::Additive: return "additive";
    case ManyToOneFunctional::BarrierSurvival: return "barrier";
  }
  return "unknown";
}

ManyToOneFunctional many_to_one_from_string(const std::string& name) {
  if (name == "one") return ManyToOneFunctional::One;
  if (name == "additive") return ManyToOneFunctional::Additive;
  if (name == "barrier") return ManyToOneFunctional::BarrierSurvival;
  throw DomainError(fmt::format("unknown many-to-one functional '{}' (expected one, additive, barrier)", name));
}

ManyToOneResult many_to_one_check(const ModelParams& params, double t, ManyToOneFunctional f,
                                  std::size_t replicas, std::uint64_t seed) {
  if (!(t > 0.0)) throw DomainError("many_to_one_check needs t > 0");
  if (replicas < 2) throw DomainError("many_to_one_check needs at least two replicas");
  const double growth = params.beta * (params.law.mean() - 1.0);
  const double lam = params.lambda_star;

  ModelParams run = params;
  double rhs = 0.0;
  switch (f) {
    case ManyToOneFunctional::One:
      run.frame = Frame::NoBarrier;
      rhs = std::exp(growth * t);
      break;
    case ManyToOneFunctional::Additive:
      run.frame = Frame::NoBarrier;
      rhs = std::exp(lam * params.x0 + (growth - 0.5 * lam * lam) * t);
      break;
    case ManyToOneFunctional::BarrierSurvival:
      if (!params.has_barrier()) throw DomainError("the barrier functional needs a barrier frame");
      rhs = std::exp(growth * t) * stay_above_line(params.x0, params.rho, t);
      break;
  }

  SimulationOptions options;
  options.checkpoints = {t};
  options.barrier_mode = BarrierMode::Kill;
  Accumulator acc;
  for (std::size_t i = 0; i < replicas; ++i) {
    double value = 0.0;
    simulate_replica(run, options, SeedMaterial{seed, i}, [&](std::size_t, const PopulationSnapshot& s) {
      if (f == ManyToOneFunctional::Additive) {
        NeumaierSum sum;
        for (const auto& p : s.particles) sum.add(std::exp(lam * (s.standard_position(p) - lam * t)));
        value = sum.value();
      } else {
        value = static_cast<double>(s.alive_count());
      }
    });
    acc.add(value);
  }
  ManyToOneResult out;
  out.lhs = acc.estimate();
  out.rhs = rhs;
  if (rhs > 0.0) {
    out.ratio = out.lhs.value / rhs;
    out.ratio_se = out.lhs.se / rhs;
  }
  return out;
}

double abk_tail_bound(double y, double t, double b, double lambda_star, double t0) {
  if (!(y > 1.0)) throw DomainError("the tail bound is only claimed for y > 1");
  if (!(t >= t0)) throw DomainError(fmt::format("the tail bound needs t >= t0 = {}", t0));
  const double exponent = -lambda_star * y - y * y / (2.0 * t) +
                          3.0 / (2.0 * lambda_star) * y * std::log(t) / t;
  return b * y * std::exp(exponent);
}

}  // namespace abbm
