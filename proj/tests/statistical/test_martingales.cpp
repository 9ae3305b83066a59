#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "abbm/estimators.hpp"
#include "abbm/stats.hpp"

using namespace abbm;

namespace {

const double kLam = std::sqrt(2.0);

Dataset free_run(double x, double z, std::size_t n, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, x, Frame::NoBarrier);
  spec.options.checkpoints = {1.0, 2.0, 3.0};
  spec.options.upper_line = z;
  spec.functionals.upper_line = z;
  spec.replicas = n;
  spec.master_seed = seed;
  return run_experiment(spec);
}

}  // namespace

TEST(Martingales, MeansAreConstantWithoutBarrier) {
  const double x = 0.5, z = 2.0;
  const auto d = free_run(x, z, 30000, 41);
  const double w0 = std::exp(kLam * x);
  for (double t : d.checkpoint_times) {
    const auto W = functional_mean(d, "W", t);
    const auto Z = functional_mean(d, "Z", t);
    const auto V = functional_mean(d, "V", t);
    EXPECT_TRUE(W.within(w0, 4.0)) << t << " W " << W.value << " +- " << W.se;
    EXPECT_TRUE(Z.within(-x * w0, 4.0)) << t << " Z " << Z.value << " +- " << Z.se;
    EXPECT_TRUE(V.within((z - x) * w0, 4.0)) << t << " V " << V.value << " +- " << V.se;
  }
}

TEST(Martingales, GeneralOffspringLaw) {
  ExperimentSpec spec;
  const auto law = OffspringLaw::from_probabilities({{1, 0.4}, {3, 0.6}});
  spec.params = ModelParams::make(1.5, 0.0, 0.3, Frame::NoBarrier, law);
  spec.options.checkpoints = {1.0, 2.0};
  spec.replicas = 20000;
  spec.master_seed = 42;
  const auto d = run_experiment(spec);
  const double lam = spec.params.lambda_star;
  for (double t : d.checkpoint_times) {
    EXPECT_TRUE(functional_mean(d, "W", t).within(std::exp(lam * 0.3), 4.0));
    EXPECT_TRUE(functional_mean(d, "Z", t).within(-0.3 * std::exp(lam * 0.3), 4.0));
  }
}

TEST(Martingales, OrderingWithBarrier) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, 1.0, Frame::StandardWithMovingBarrier);
  spec.options.checkpoints = {1.0, 2.0, 3.0, 4.0};
  spec.options.barrier_mode = BarrierMode::Tag;
  spec.options.upper_line = 2.0;
  spec.functionals.upper_line = 2.0;
  spec.replicas = 20000;
  spec.master_seed = 43;
  const auto d = run_experiment(spec);
  for (std::size_t k = 1; k < d.checkpoint_times.size(); ++k) {
    const double s = d.checkpoint_times[k - 1], t = d.checkpoint_times[k];
    for (const char* f : {"W_tilde", "V_tilde"}) {
      const auto a = functional_mean(d, f, s), b = functional_mean(d, f, t);
      EXPECT_LE(b.value - a.value, 2.0 * std::hypot(a.se, b.se)) << f << " " << s << "->" << t;
    }
    const auto a = functional_mean(d, "U", s), b = functional_mean(d, "U", t);
    EXPECT_GE(b.value - a.value, -2.0 * std::hypot(a.se, b.se)) << "U " << s << "->" << t;
  }
  EXPECT_GT(functional_mean(d, "U", 4.0).value, 0.0);
}

TEST(Martingales, TruncatedZsApproachesZTilde) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, 1.0, Frame::StandardWithMovingBarrier);
  spec.options.checkpoints = {7.0};
  spec.options.barrier_mode = BarrierMode::Tag;
  spec.functionals.truncation_times = {1.0, 3.0, 5.0};
  spec.replicas = 1500;
  spec.master_seed = 44;
  const auto d = run_experiment(spec);
  std::vector<std::vector<double>> gaps(3);
  for (const auto& r : d.replicas) {
    const auto& c = r.checkpoints[0];
    for (std::size_t j = 0; j < 3; ++j) gaps[j].push_back(std::abs(c.Z_s[j] - *c.Z_tilde));
  }
  std::vector<double> med;
  for (auto& g : gaps) med.push_back(median(g));
  EXPECT_GE(med[0], med[1]);
  EXPECT_GE(med[1], med[2]);
}

TEST(Identity, VEqualsZWPlusZWhenUntouched) {
  ExperimentSpec spec;
  spec.params = ModelParams::make(1.0, 0.0, 1.0, Frame::StandardWithMovingBarrier);
  spec.options.checkpoints = {2.0, 4.0, 6.0};
  spec.options.barrier_mode = BarrierMode::Tag;
  spec.options.upper_line = 6.0;
  spec.functionals.upper_line = 6.0;
  spec.replicas = 1000;
  spec.master_seed = 45;
  const auto d = run_experiment(spec);
  std::size_t untouched = 0;
  for (const auto& r : d.replicas) {
    const auto& last = r.checkpoints.back();
    if (!*last.upper_line_untouched) continue;
    ++untouched;
    for (const auto& c : r.checkpoints) {
      const double scale = std::abs(*c.V) + 6.0 * std::abs(*c.W) + std::abs(*c.Z) + 1e-300;
      EXPECT_LE(std::abs(*c.V - (6.0 * *c.W + *c.Z)), 1e-9 * scale);
      const double st = std::abs(*c.V_tilde) + 6.0 * std::abs(*c.W_tilde) + std::abs(*c.Z_tilde) + 1e-300;
      EXPECT_LE(std::abs(*c.V_tilde - (6.0 * *c.W_tilde + *c.Z_tilde)), 1e-9 * st);
    }
  }
  EXPECT_GE(untouched, 980u);
}
