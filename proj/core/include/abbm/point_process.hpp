#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "abbm/functionals.hpp"
#include "abbm/model.hpp"
#include "abbm/rng.hpp"
#include "abbm/stats.hpp"

namespace abbm {

/// Positions seen from the maximum of a branching run conditioned on an
/// unusually high maximum.
struct DecorationSample {
  PointMeasure measure;
  double t = 0.0;
  double acceptance_rate = 0.0;
  std::size_t attempts = 0;
};

struct DecorationBatch {
  std::vector<DecorationSample> samples;
  std::size_t attempts = 0;
  Estimate acceptance;
};

/// Rejection sampling: runs unbarriered BBM to t from the origin and accepts
/// when M_t >= lambda* t. Attempt i uses stream i of `seed`. Throws
/// BudgetError if no attempt within the budget is accepted.
DecorationSample sample_decoration(const ModelParams& params, double t, std::size_t budget,
                                   std::uint64_t seed);

/// `count` accepted samples (or BudgetError once `budget` attempts are spent).
DecorationBatch sample_decorations(const ModelParams& params, double t, std::size_t count,
                                   std::size_t budget, std::uint64_t seed);

using DecorationSampler = std::function<const PointMeasure&(RandomStream&)>;

/// Uniform draw with replacement from a batch of decorations.
DecorationSampler pool_sampler(const std::vector<DecorationSample>& pool);

/// Decorated Poisson process restricted to [y_min, inf): Poisson(C Z e^{-lambda y_min})
/// centers at y_min + Exp(lambda), each with a decoration shifted to it.
/// Z = 0 gives the empty measure; Z < 0 is a DomainError.
PointMeasure sample_dppp(double c, double z, double y_min, double lambda,
                         const DecorationSampler& decorations, RandomStream& rng);

/// Centers only.
std::vector<double> sample_dppp_centers(double c, double z, double y_min, double lambda,
                                        RandomStream& rng);

/// C(phi) = C int (1 - E exp(-<D, phi(. + z)>)) lambda e^{-lambda z} dz with the
/// expectation taken over the empirical decorations.
double decoration_constant(double c_hat, double lambda, const TestFunction& phi,
                           const std::vector<DecorationSample>& decorations);

}  // namespace abbm
