#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "abbm/errors.hpp"
#include "abbm/oracles.hpp"

namespace abbm {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kAbsTol = 0.0;
constexpr double kRelTol = 1e-13;

struct WaveOde {
  double rho;
  double beta;
  const OffspringLaw* law;

  void operator()(const State& s, State& ds, double /*x*/) const {
    ds[0] = s[1];
    ds[1] = 2.0 * rho * s[1] - 2.0 * beta * (law->generating_function(s[0]) - s[0]);
  }
};

auto make_stepper() {
  return odeint::make_dense_output(kAbsTol, kRelTol, odeint::runge_kutta_dopri5<State>());
}

auto make_controlled() {
  return odeint::make_controlled(kAbsTol, kRelTol, odeint::runge_kutta_dopri5<State>());
}

enum class Shot { Undershoot, Overshoot, Ambiguous };

struct Roots {
  double stable;
  double unstable;
};

Roots linear_roots(double rho, double beta, const OffspringLaw& law) {
  const double disc = std::sqrt(rho * rho + 2.0 * beta * (1.0 - law.probability(1)));
  return {rho - disc, rho + disc};
}

// Integrate forward from g(0) = 1, g'(0) = -c and classify the trajectory.
Shot shoot(const WaveOde& ode, double c, double x_max, const Roots& roots, double threshold) {
  auto stepper = make_stepper();
  stepper.initialize(State{1.0, -c}, 0.0, 1e-3);
  while (stepper.current_time() < x_max) {
    stepper.do_step(ode);
    const State& s = stepper.current_state();
    if (s[0] < 0.0) return Shot::Overshoot;
    if (s[1] > 0.0) return Shot::Undershoot;
    if (s[0] < threshold)
      return s[1] - roots.stable * s[0] > 0.0 ? Shot::Undershoot : Shot::Overshoot;
  }
  return Shot::Ambiguous;
}

// Integrate backward over the grid from the linearized tail amplitude eps at
// its right end. Returns g(0) - 1, or +1 as soon as g exceeds 1 with x > 0.
// Fills g and g'(0) when requested.
double backward_sweep(const WaveOde& ode, double log_eps, const std::vector<double>& grid,
                      const Roots& roots, std::vector<double>* g = nullptr,
                      double* slope0 = nullptr) {
  const double eps = std::exp(log_eps);
  State s{eps, roots.stable * eps};
  auto controlled = make_controlled();
  if (g) g->back() = eps;
  for (std::size_t i = grid.size() - 1; i > 0; --i) {
    odeint::integrate_adaptive(controlled, ode, s, grid[i], grid[i - 1], grid[i - 1] - grid[i]);
    if (g) (*g)[i - 1] = s[0];
    if (i > 1 && s[0] > 1.0) return 1.0;
  }
  if (slope0) *slope0 = s[1];
  return s[0] - 1.0;
}

}  // namespace

double WaveSolution::operator()(double at) const {
  if (x.empty()) throw StateError("empty wave solution");
  if (at <= 0.0) return 1.0;
  if (at >= x_max) return g.back() * std::exp(tail_rate * (at - x_max));
  const double h = x[1] - x[0];
  const auto i = static_cast<std::size_t>(at / h);
  if (i + 1 >= x.size()) return g.back();
  const double w = (at - x[i]) / h;
  return (1.0 - w) * g[i] + w * g[i + 1];
}

double wave_residual(const WaveSolution& sol, double rho, const OffspringLaw& law, double beta) {
  if (sol.x.size() < 5) return 0.0;
  const double h = sol.x[1] - sol.x[0];
  const auto& g = sol.g;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < sol.x.size(); ++i) {
    const double g2 = (-g[i + 2] + 16.0 * g[i + 1] - 30.0 * g[i] + 16.0 * g[i - 1] - g[i - 2]) / (12.0 * h * h);
    const double g1 = (-g[i + 2] + 8.0 * g[i + 1] - 8.0 * g[i - 1] + g[i - 2]) / (12.0 * h);
    const double r = 0.5 * g2 - rho * g1 + beta * (law.generating_function(g[i]) - g[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

WaveSolution solve_travelling_wave(double rho, const OffspringLaw& law, WaveOptions options) {
  if (!(options.beta > 0.0)) throw ParameterError("wave solver needs beta > 0");
  if (!(options.x_max > 0.0) || !(options.output_step > 0.0))
    throw ParameterError("wave solver needs positive x_max and output_step");
  const double lam = lambda_star(options.beta, law);
  const Roots roots = linear_roots(rho, options.beta, law);
  WaveSolution sol;
  sol.tail_rate = roots.stable;

  const auto make_grid = [&](double x_max) {
    const auto n = static_cast<std::size_t>(std::llround(x_max / options.output_step));
    sol.x.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) sol.x[i] = static_cast<double>(i) * options.output_step;
    sol.x.back() = x_max;
  };

  if (rho >= lam) {
    sol.constant = true;
    sol.x_max = options.x_max;
    make_grid(options.x_max);
    sol.g.assign(sol.x.size(), 1.0);
    sol.tail_rate = 0.0;
    return sol;
  }

  const WaveOde ode{rho, options.beta, &law};
  std::string trace;
  double x_max = options.x_max;
  for (int attempt = 0; attempt <= options.max_doublings; ++attempt, x_max *= 2.0) {
    // Forward shooting: bracket -g'(0) between an undershoot and an overshoot.
    double lo = 0.0;
    double hi = 1.0;
    Shot s = Shot::Undershoot;
    for (int k = 0; k < 60 && (s = shoot(ode, hi, x_max, roots, options.tail_threshold)) == Shot::Undershoot; ++k)
      hi *= 2.0;
    if (s != Shot::Overshoot) {
      trace += fmt::format("x_max={}: no overshoot at c={} ({}); ", x_max, hi,
                           s == Shot::Ambiguous ? "ambiguous" : "undershoot");
      continue;
    }
    bool ambiguous = false;
    int steps = 0;
    while (hi - lo > options.tol && steps < 200) {
      const double mid = 0.5 * (lo + hi);
      const Shot m = shoot(ode, mid, x_max, roots, options.tail_threshold);
      ++steps;
      if (m == Shot::Ambiguous) {
        ambiguous = true;
        trace += fmt::format("x_max={}: ambiguous at c={}; ", x_max, mid);
        break;
      }
      (m == Shot::Undershoot ? lo : hi) = mid;
    }
    if (ambiguous) continue;
    const double c = 0.5 * (lo + hi);

    // Backward integration from the tail on the amplitude eps at x_max.
    make_grid(x_max);
    double a = roots.stable * x_max - 5.0;
    double b = roots.stable * x_max + 5.0;
    int expand = 0;
    while (backward_sweep(ode, a, sol.x, roots) > 0.0 && expand++ < 40) a -= 5.0;
    expand = 0;
    while (backward_sweep(ode, b, sol.x, roots) < 0.0 && expand++ < 40) b += 5.0;
    if (backward_sweep(ode, a, sol.x, roots) > 0.0 || backward_sweep(ode, b, sol.x, roots) < 0.0)
      throw NumericError("wave solver: could not bracket the tail amplitude; " + trace);
    for (int k = 0; k < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++k) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (backward_sweep(ode, mid, sol.x, roots) > 0.0 ? b : a) = mid;
    }
    const double log_eps = 0.5 * (a + b);
    if (std::exp(log_eps) >= options.boundary_tol) {
      trace += fmt::format("x_max={}: tail amplitude {} above boundary tolerance; ", x_max,
                           std::exp(log_eps));
      continue;
    }

    sol.g.assign(sol.x.size(), 0.0);
    sol.x_max = x_max;
    double slope0 = 0.0;
    backward_sweep(ode, log_eps, sol.x, roots, &sol.g, &slope0);
    sol.slope_at_zero = slope0;
    sol.shooting_parameter = c;
    sol.bisection_steps = steps;
    sol.residual = wave_residual(sol, rho, law, options.beta);

    if (std::abs(sol.g.front() - 1.0) > 1e-12)
      throw NumericError(fmt::format("wave solver: g(0) = {} after tail matching", sol.g.front()));
    if (std::abs(-slope0 - c) > 1e-6 * std::max(1.0, c))
      throw NumericError(fmt::format(
          "wave solver: forward shooting g'(0) = {} disagrees with tail matching g'(0) = {}", -c,
          slope0));
    return sol;
  }
  throw NumericError("wave solver failed after extending x_max: " + trace);
}

}  // namespace abbm
