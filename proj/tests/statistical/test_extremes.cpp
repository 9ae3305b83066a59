#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "abbm/estimators.hpp"
#include "abbm/gumbel.hpp"
#include "abbm/oracles.hpp"
#include "abbm/point_process.hpp"
#include "abbm/stats.hpp"
#include "reference.hpp"

using namespace abbm;

namespace {
const double kLam = std::sqrt(2.0);
}

TEST(Gumbel, SyntheticRecovery) {
  RandomStream rng(51, 0);
  const double c = 0.35;
  std::vector<MaxSample> s;
  for (int i = 0; i < 20000; ++i) {
    const double z = std::exp(0.8 * rng.normal());
    s.push_back({sample_gumbel_given_z(c, z, kLam, rng), z});
  }
  const auto fit = gumbel_mixture_fit(s, kLam);
  EXPECT_NEAR(fit.c_hat / c, 1.0, 0.05);
  EXPECT_LT(fit.ks, 0.015);
}

TEST(Gumbel, MisspecifiedProxyFitsWorse) {
  RandomStream rng(52, 0);
  std::vector<MaxSample> good, bad;
  for (int i = 0; i < 10000; ++i) {
    const double z = std::exp(1.2 * rng.normal());
    const double m = sample_gumbel_given_z(0.5, z, kLam, rng);
    good.push_back({m, z});
    bad.push_back({m, 1.0});
  }
  EXPECT_LT(gumbel_mixture_fit(good, kLam).ks, gumbel_mixture_fit(bad, kLam).ks);
}

TEST(Dppp, MaxLaw) {
  RandomStream rng(53, 0);
  const double c = 0.6, z = 1.7, y_min = -3.0;
  std::vector<double> maxima;
  for (int i = 0; i < 20000; ++i) {
    const auto cs = sample_dppp_centers(c, z, y_min, kLam, rng);
    if (!cs.empty()) maxima.push_back(*std::max_element(cs.begin(), cs.end()));
  }
  const double floor = std::exp(-c * z * std::exp(-kLam * y_min));
  const auto ks = ks_one_sample(maxima, [&](double y) {
    return (std::exp(-c * z * std::exp(-kLam * y)) - floor) / (1.0 - floor);
  });
  EXPECT_GT(ks.p_value, 1e-3);
}

TEST(Decoration, AcceptanceMatchesMaximumTail) {
  const auto params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  const auto batch = sample_decorations(params, 4.0, 200, 100000, 54);
  // Independent estimate of P(M_4 >= 4 lambda*) from plain runs.
  ExperimentSpec spec;
  spec.params = params;
  spec.options.checkpoints = {4.0};
  spec.replicas = 20000;
  spec.master_seed = 55;
  const auto d = run_experiment(spec);
  std::size_t hits = 0;
  for (const auto& r : d.replicas) hits += *r.checkpoints[0].max_all >= 4.0 * kLam;
  const auto p = proportion_estimate(hits, d.replicas.size());
  EXPECT_LT(std::abs(batch.acceptance.value - p.value), 4.0 * std::hypot(batch.acceptance.se, p.se));
}

TEST(LateTouch, DecreasesInS) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, 1.0, Frame::StandardWithMovingBarrier);
  spec.options.checkpoints = {6.0};
  spec.options.barrier_mode = BarrierMode::Tag;
  spec.functionals.late_touch_times = {1.0, 2.0, 4.0};
  spec.replicas = 2000;
  spec.master_seed = 56;
  const auto d = run_experiment(spec);
  const auto a = late_touch_prob(d, 1.0, 6.0), b = late_touch_prob(d, 2.0, 6.0), c = late_touch_prob(d, 4.0, 6.0);
  EXPECT_GE(a.value, b.value);
  EXPECT_GE(b.value, c.value);
  EXPECT_LT(c.value, 0.1);
}

TEST(Laplace, ZeroFunctionAndRange) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, 1.0, Frame::StandardWithMovingBarrier);
  spec.options.checkpoints = {3.0, 6.0};
  spec.functionals.test_functions = {TestFunction::zero(), canonical_test_function("step")};
  spec.replicas = 500;
  spec.master_seed = 57;
  const auto d = run_experiment(spec);
  EXPECT_EQ(laplace_functional_estimate(d, TestFunction::zero(), 6.0).value, 1.0);
  const auto l = laplace_functional_estimate(d, canonical_test_function("step"), 6.0);
  EXPECT_GT(l.value, 0.0);
  EXPECT_LT(l.value, 1.0);
}

TEST(Dppp, CountsAboveLevels) {
  RandomStream rng(57, 0);
  const double c = 0.6, z = 1.7, y_min = -3.0;
  const int n = 100000;
  for (double y : {0.0, 1.0}) {
    std::vector<double> counts;
    for (int i = 0; i < n; ++i) {
      const auto cs = sample_dppp_centers(c, z, y_min, kLam, rng);
      counts.push_back(static_cast<double>(std::count_if(cs.begin(), cs.end(), [&](double v) { return v > y; })));
    }
    const auto e = mean_estimate(counts);
    EXPECT_TRUE(e.within(c * z * std::exp(-kLam * y), 4)) << "y=" << y << " mean " << e.value;
  }
}

TEST(Dppp, DecoratedMaxIsMaxCenter) {
  const auto params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  const auto pool = sample_decorations(params, 4.0, 50, 100000, 58).samples;
  const auto sampler = pool_sampler(pool);
  for (std::uint64_t i = 0; i < 500; ++i) {
    RandomStream a(59, i), b(59, i);
    const auto m = sample_dppp(0.6, 1.7, -2.0, kLam, sampler, a);
    const auto cs = sample_dppp_centers(0.6, 1.7, -2.0, kLam, b);
    ASSERT_EQ(m.empty(), cs.empty());
    if (!cs.empty()) EXPECT_EQ(*m.max(), *std::max_element(cs.begin(), cs.end()));
  }
}

TEST(Decoration, AcceptanceAtSixMatchesDirectRuns) {
  const auto params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  const auto batch = sample_decorations(params, 6.0, 200, 100000, 60);
  ExperimentSpec spec;
  spec.params = params;
  spec.options.checkpoints = {6.0};
  spec.replicas = 10000;
  spec.master_seed = 61;
  const auto d = run_experiment(spec);
  std::size_t hits = 0;
  for (const auto& r : d.replicas) hits += *r.checkpoints[0].max_all >= 6.0 * kLam;
  const auto p = proportion_estimate(hits, d.replicas.size());
  EXPECT_LT(std::abs(batch.acceptance.value - p.value), 3.0 * std::hypot(batch.acceptance.se, p.se));
}

TEST(Decoration, TailBoundRatioIsStable) {
  const auto params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  std::vector<double> ratios;
  for (double t : {5.0, 6.0, 7.0}) {
    const auto batch = sample_decorations(params, t, 150, 200000, 62 + static_cast<std::uint64_t>(t));
    const double y = 3.0 / (2.0 * kLam) * std::log(t);
    ratios.push_back(batch.acceptance.value / abk_tail_bound(y, t, 1.0));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_GT(*lo, 0.0);
  EXPECT_LT(*hi / *lo, 2.0) << ratios[0] << " " << ratios[1] << " " << ratios[2];
}

TEST(LateTouch, FarStartRarelyTouchesLate) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, 8.0, Frame::StandardWithMovingBarrier);
  spec.options.checkpoints = {6.0};
  spec.options.barrier_mode = BarrierMode::Tag;
  spec.functionals.late_touch_times = {1.0};
  spec.replicas = 1000;
  spec.master_seed = 63;
  const auto d = run_experiment(spec);
  EXPECT_LT(late_touch_prob(d, 1.0, 6.0).value, 0.01);
}

TEST(Maximum, LawMatchesFkppSolution) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
  spec.options.checkpoints = {4.0, 5.0, 6.0, 7.0, 8.0};
  spec.replicas = 3000;
  spec.master_seed = 64;
  const auto d = run_experiment(spec);
  ref::FkppTail pde;
  std::vector<double> times, means;
  for (std::size_t k = 0; k < spec.options.checkpoints.size(); ++k) {
    const double t = spec.options.checkpoints[k];
    pde.advance_to(t);
    times.push_back(t);
    means.push_back(pde.mean());
    std::vector<double> maxima;
    for (const auto& r : d.replicas) maxima.push_back(*r.checkpoints[k].max_all);
    const auto ks = ks_one_sample(maxima, [&](double x) { return pde.cdf(x); });
    EXPECT_GT(ks.p_value, 1e-3) << "t=" << t << " KS " << ks.statistic;
  }
  const auto g = growth_rate(d, 4.0, 8.0);
  const double slope = least_squares_slope(times, means);
  EXPECT_TRUE(g.slope.within(slope, 4)) << g.slope.value << " vs " << slope;
}
