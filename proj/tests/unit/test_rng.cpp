#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "abbm/rng.hpp"
#include "abbm/stats.hpp"

using namespace abbm;

TEST(RandomStream, ReproducibleFromSeedMaterial) {
  RandomStream a(42, 7), b(SeedMaterial{42, 7});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(RandomStream, StreamsDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 64; ++s) first.insert(RandomStream(1, s)());
  for (std::uint64_t m = 2; m < 10; ++m) first.insert(RandomStream(m, 0)());
  EXPECT_EQ(first.size(), 72u);
}

TEST(RandomStream, UniformRange) {
  RandomStream rng(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(rng.uniform_open(), 0.0);
  }
}

TEST(RandomStream, Moments) {
  RandomStream rng(5, 1);
  Accumulator n, e, p;
  for (int i = 0; i < 200000; ++i) {
    n.add(rng.normal());
    e.add(rng.exponential(2.0));
    p.add(static_cast<double>(rng.poisson(3.5)));
  }
  EXPECT_NEAR(n.mean(), 0.0, 5 * n.estimate().se);
  EXPECT_NEAR(n.variance(), 1.0, 0.02);
  EXPECT_NEAR(e.mean(), 0.5, 5 * e.estimate().se);
  EXPECT_NEAR(p.mean(), 3.5, 5 * p.estimate().se);
  EXPECT_NEAR(p.variance(), 3.5, 0.06);
}

TEST(RandomStream, PoissonLargeMean) {
  RandomStream rng(5, 2);
  Accumulator p;
  for (int i = 0; i < 20000; ++i) p.add(static_cast<double>(rng.poisson(2500.0)));
  EXPECT_NEAR(p.mean(), 2500.0, 5 * p.estimate().se);
  EXPECT_EQ(rng.poisson(0.0), 0u);
}

TEST(SplitMix, KnownValue) {
  // Reference output of the published splitmix64 for state 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}
