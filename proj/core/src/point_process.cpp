#include "abbm/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "abbm/engine.hpp"
#include "abbm/errors.hpp"

namespace abbm {

namespace {

ModelParams classical(const ModelParams& params) {
  if (params.has_barrier())
    throw DomainError("decorations are sampled from the unbarriered process (frame 'none')");
  return params;
}

// One rejection attempt; returns true and fills `out` on acceptance.
bool attempt(const ModelParams& params, double t, SeedMaterial seed, PointMeasure& out) {
  SimulationOptions options;
  options.checkpoints = {t};
  bool accepted = false;
  simulate_replica(params, options, seed, [&](std::size_t, const PopulationSnapshot& s) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : s.particles) m = std::max(m, p.position);
    if (m - params.x0 < params.lambda_star * t) return;
    accepted = true;
    out.atoms.clear();
    out.atoms.reserve(s.particles.size());
    for (const auto& p : s.particles) out.atoms.push_back(p.position - m);
    std::sort(out.atoms.begin(), out.atoms.end(), std::greater<>());
  });
  return accepted;
}

}  // namespace

DecorationSample sample_decoration(const ModelParams& params, double t, std::size_t budget,
                                   std::uint64_t seed) {
  const ModelParams p = classical(params);
  if (!(t > 0.0)) throw DomainError("decoration conditioning time must be > 0");
  DecorationSample out;
  out.t = t;
  for (std::size_t i = 0; i < budget; ++i) {
    if (attempt(p, t, SeedMaterial{seed, i}, out.measure)) {
      out.attempts = i + 1;
      out.acceptance_rate = 1.0 / static_cast<double>(i + 1);
      return out;
    }
  }
  throw BudgetError(fmt::format("no decoration accepted in {} attempts at t = {}", budget, t), 0.0);
}

DecorationBatch sample_decorations(const ModelParams& params, double t, std::size_t count,
                                   std::size_t budget, std::uint64_t seed) {
  const ModelParams p = classical(params);
  if (!(t > 0.0)) throw DomainError("decoration conditioning time must be > 0");
  DecorationBatch batch;
  PointMeasure m;
  std::size_t i = 0;
  for (; i < budget && batch.samples.size() < count; ++i) {
    if (attempt(p, t, SeedMaterial{seed, i}, m)) {
      DecorationSample s;
      s.measure = std::move(m);
      s.t = t;
      batch.samples.push_back(std::move(s));
      m = {};
    }
  }
  batch.attempts = i;
  batch.acceptance = proportion_estimate(batch.samples.size(), i);
  for (auto& s : batch.samples) {
    s.attempts = i;
    s.acceptance_rate = batch.acceptance.value;
  }
  if (batch.samples.size() < count)
    throw BudgetError(fmt::format("only {} of {} decorations accepted in {} attempts at t = {}",
                                  batch.samples.size(), count, budget, t),
                      batch.acceptance.value);
  return batch;
}

DecorationSampler pool_sampler(const std::vector<DecorationSample>& pool) {
  if (pool.empty()) throw EmptyDataError("decoration pool is empty");
  return [&pool](RandomStream& rng) -> const PointMeasure& {
    const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(pool.size()));
    return pool[std::min(i, pool.size() - 1)].measure;
  };
}

std::vector<double> sample_dppp_centers(double c, double z, double y_min, double lambda,
                                        RandomStream& rng) {
  if (!(c > 0.0)) throw DomainError("DPPP intensity constant must be > 0");
  if (z < 0.0 || !std::isfinite(z)) throw DomainError("DPPP needs Z >= 0");
  if (!std::isfinite(y_min)) throw DomainError("DPPP needs a finite lower level");
  if (!(lambda > 0.0)) throw DomainError("DPPP needs lambda* > 0");
  std::vector<double> centers;
  if (z == 0.0) return centers;
  const std::uint64_t n = rng.poisson(c * z * std::exp(-lambda * y_min));
  centers.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) centers.push_back(y_min + rng.exponential(lambda));
  return centers;
}

PointMeasure sample_dppp(double c, double z, double y_min, double lambda,
                         const DecorationSampler& decorations, RandomStream& rng) {
  PointMeasure out;
  const auto centers = sample_dppp_centers(c, z, y_min, lambda, rng);
  for (double x : centers) {
    if (!decorations) {
      out.atoms.push_back(x);
      continue;
    }
    for (double d : decorations(rng).atoms) out.atoms.push_back(x + d);
  }
  return out;
}

namespace {

// int (1 - e^{-s(z)}) lambda e^{-lambda z} dz over the real line for
// s(z) = sum_v phi(v + z), which is piecewise linear in z with knots at b_j - v.
double decorated_integral(const std::vector<double>& atoms, const TestFunction& phi,
                          std::vector<std::pair<double, double>>& knots, double lambda) {
  const auto& b = phi.breakpoints();
  const auto& y = phi.values();
  knots.clear();
  for (double v : atoms)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double left = j == 0 ? 0.0 : (y[j] - y[j - 1]) / (b[j] - b[j - 1]);
      const double right = j + 1 == b.size() ? 0.0 : (y[j + 1] - y[j]) / (b[j + 1] - b[j]);
      knots.emplace_back(b[j] - v, right - left);
    }
  if (knots.empty()) return 0.0;
  std::sort(knots.begin(), knots.end());

  NeumaierSum total;
  double z = knots.front().first, s = 0.0, slope = 0.0;
  for (const auto& [zk, dslope] : knots) {
    const double h = zk - z;
    if (h > 0.0) {
      const double kappa = slope + lambda;
      const double piece = std::abs(kappa * h) < 1e-12 ? h : -std::expm1(-kappa * h) / kappa;
      // (e^{-lambda z} - e^{-lambda zk}) - lambda e^{-s - lambda z} piece
      total.add(std::exp(-lambda * z) * (-std::expm1(-lambda * h)) - lambda * std::exp(-s - lambda * z) * piece);
      s = std::max(s + slope * h, 0.0);
      z = zk;
    }
    slope += dslope;
  }
  total.add(-std::expm1(-s) * std::exp(-lambda * z));
  return total.value();
}

}  // namespace

double decoration_constant(double c_hat, double lambda, const TestFunction& phi,
                           const std::vector<DecorationSample>& decorations) {
  if (decorations.empty()) throw EmptyDataError("C(phi) needs at least one decoration");
  if (!(c_hat > 0.0) || !(lambda > 0.0)) throw DomainError("C(phi) needs C > 0 and lambda* > 0");
  NeumaierSum mean;
  std::vector<std::pair<double, double>> knots;
  for (const auto& d : decorations) mean.add(decorated_integral(d.measure.atoms, phi, knots, lambda));
  return c_hat * mean.value() / static_cast<double>(decorations.size());
}

}  // namespace abbm
