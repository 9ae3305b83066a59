#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abbm/model.hpp"
#include "abbm/stats.hpp"

namespace abbm {

/// Brownian motion from 0 against the line y + mu s.
struct LineHit {
  /// Probability of ever touching the line.
  double hit = 1.0;
  /// Probability of staying strictly below it forever.
  double stay_below = 0.0;
  /// Set when mu <= 0: the hit is certain and reported as exactly 1.
  bool certain = false;
};

/// Throws DomainError for y < 0.
LineHit hit_prob_line(double y, double mu);

/// Density of the first time BM from x > 0 reaches the line rho r. Throws
/// DomainError for x <= 0 or r <= 0.
double hitting_time_density(double x, double rho, double r);

/// P(hit by time r), including the mass of paths that hit before r.
double hitting_time_cdf(double x, double rho, double r);

/// x / mu; DomainError for mu <= 0 (the mean is infinite) or x <= 0.
double hitting_time_mean(double x, double mu);

/// P(BM from x stays above rho s on [0, t]).
double stay_above_line(double x, double rho, double t);

enum class ManyToOneFunctional {
  One,
  Additive,
  BarrierSurvival,
};

std::string to_string(ManyToOneFunctional f);
/// Accepts "one", "additive", "barrier"; DomainError otherwise.
ManyToOneFunctional many_to_one_from_string(const std::string& name);

struct ManyToOneResult {
  Estimate lhs;
  double rhs = 0.0;
  /// lhs / rhs with its standard error.
  double ratio = 0.0;
  double ratio_se = 0.0;
};

/// Monte Carlo of E_x[sum_u F] over the particle system against the
/// single-particle expectation times e^{beta(m-1)t}. For BarrierSurvival
/// the particle system runs in kill mode with the supplied barrier; for the
/// others the barrier is ignored.
ManyToOneResult many_to_one_check(const ModelParams& params, double t, ManyToOneFunctional f,
                                  std::size_t replicas, std::uint64_t seed);

/// b y exp(-lambda* y - y^2/(2t) + 3/(2 lambda*) y log t / t). Throws
/// DomainError for y <= 1 or t < t0.
double abk_tail_bound(double y, double t, double b, double lambda_star = 1.4142135623730951,
                      double t0 = 5.0);

struct WaveOptions {
  double x_max = 40.0;
  int max_doublings = 3;
  /// Bisection stops when the bracket on -g'(0) is narrower than this.
  double tol = 1e-12;
  double output_step = 1e-3;
  /// Below this value the solution is continued by its linearized tail.
  double tail_threshold = 1e-6;
  /// The solution must fall below this at x_max, else x_max is doubled.
  double boundary_tol = 1e-8;
  double beta = 1.0;
};

struct WaveSolution {
  std::vector<double> x;
  std::vector<double> g;
  /// g'(0).
  double slope_at_zero = 0.0;
  /// Max-norm residual of the ODE on the output grid (fourth-order differences).
  double residual = 0.0;
  double x_max = 0.0;
  /// rho >= lambda*: extinction is certain and g is the constant 1.
  bool constant = false;
  int bisection_steps = 0;
  /// Decay rate r < 0 of the linearized tail g ~ e^{r x}.
  double tail_rate = 0.0;
  /// -g'(0) found by forward shooting from x = 0.
  double shooting_parameter = 0.0;

  /// Linear interpolation; 1 left of 0, the last value times the tail decay
  /// right of x_max.
  double operator()(double x) const;
  /// 1 - g(x).
  double survival(double x) const { return 1.0 - (*this)(x); }
};

/// Shooting solution of 1/2 g'' - rho g' + beta (f(g) - g) = 0 on (0, inf)
/// with g(0) = 1, g(inf) = 0, f the offspring generating function.
WaveSolution solve_travelling_wave(double rho, const OffspringLaw& law, WaveOptions options = {});

/// Finite-difference residual of the ODE on a solution's grid.
double wave_residual(const WaveSolution& sol, double rho, const OffspringLaw& law, double beta);

}  // namespace abbm
