#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "abbm/errors.hpp"
#include "abbm/point_process.hpp"
#include "reference.hpp"

using namespace abbm;

namespace {
const ModelParams kFree = ModelParams::make(1.0, 0.0, 0.0, Frame::NoBarrier);
}

TEST(Decoration, MaxAtomIsZero) {
  const auto batch = sample_decorations(kFree, 3.0, 20, 100000, 5);
  ASSERT_EQ(batch.samples.size(), 20u);
  EXPECT_GE(batch.attempts, 20u);
  EXPECT_NEAR(batch.acceptance.value, 20.0 / batch.attempts, 1e-15);
  for (const auto& s : batch.samples) {
    ASSERT_FALSE(s.measure.empty());
    EXPECT_EQ(*s.measure.max(), 0.0);
    EXPECT_EQ(s.measure.atoms.front(), 0.0);
    for (std::size_t i = 1; i < s.measure.size(); ++i) EXPECT_LE(s.measure.atoms[i], s.measure.atoms[i - 1]);
  }
}

TEST(Decoration, Reproducible) {
  const auto a = sample_decoration(kFree, 2.0, 10000, 9);
  const auto b = sample_decoration(kFree, 2.0, 10000, 9);
  EXPECT_EQ(a.measure, b.measure);
  EXPECT_EQ(a.attempts, b.attempts);
}

TEST(Decoration, Errors) {
  const auto barrier = ModelParams::make(1.0, 0.0, 1.0, Frame::StandardWithMovingBarrier);
  EXPECT_THROW(sample_decoration(barrier, 2.0, 10, 1), DomainError);
  try {
    sample_decorations(kFree, 6.0, 1000, 5, 1);
    FAIL();
  } catch (const BudgetError& e) {
    EXPECT_GE(e.observed_acceptance(), 0.0);
  }
}

TEST(Dppp, CenterCountAndLaw) {
  RandomStream rng(2, 0);
  const double c = 0.7, z = 1.5, lam = std::sqrt(2.0), y_min = -1.0;
  const double mean = c * z * std::exp(-lam * y_min);
  Accumulator count;
  std::vector<double> centers;
  for (int i = 0; i < 20000; ++i) {
    const auto cs = sample_dppp_centers(c, z, y_min, lam, rng);
    count.add(static_cast<double>(cs.size()));
    for (double x : cs) {
      ASSERT_GE(x, y_min);
      if (centers.size() < 20000) centers.push_back(x);
    }
  }
  EXPECT_NEAR(count.mean(), mean, 5 * count.estimate().se);
  EXPECT_NEAR(count.variance(), mean, 0.1);
  const auto ks = ks_one_sample(centers, [&](double x) { return -std::expm1(-lam * (x - y_min)); });
  EXPECT_GT(ks.p_value, 1e-3);
}

TEST(Dppp, DecoratedClusters) {
  RandomStream rng(2, 1);
  std::vector<DecorationSample> pool(1);
  pool[0].measure.atoms = {0.0, -0.5, -2.0};
  const auto m = sample_dppp(1.0, 1.0, -1.0, std::sqrt(2.0), pool_sampler(pool), rng);
  EXPECT_EQ(m.size() % 3, 0u);
  const auto empty = sample_dppp(1.0, 0.0, -1.0, std::sqrt(2.0), pool_sampler(pool), rng);
  EXPECT_TRUE(empty.empty());
  EXPECT_THROW(sample_dppp(1.0, -1.0, -1.0, std::sqrt(2.0), pool_sampler(pool), rng), DomainError);
}

TEST(Dppp, UndecoratedByDefault) {
  RandomStream a(3, 0), b(3, 0);
  const auto m = sample_dppp(1.0, 2.0, -2.0, std::sqrt(2.0), DecorationSampler{}, a);
  auto cs = sample_dppp_centers(1.0, 2.0, -2.0, std::sqrt(2.0), b);
  std::sort(cs.begin(), cs.end());
  auto atoms = m.atoms;
  std::sort(atoms.begin(), atoms.end());
  EXPECT_EQ(atoms, cs);
}

TEST(DecorationConstant, SingleAtomDecoration) {
  // D = delta_0: C(phi) = C int (1 - e^{-phi(z)}) lambda e^{-lambda z} dz.
  std::vector<DecorationSample> pool(1);
  pool[0].measure.atoms = {0.0};
  const double lam = std::sqrt(2.0), c = 0.8;
  const auto phi = TestFunction::tent(0.0, 1.0);
  const double expected =
      c * ref::trapezoid([&](double z) { return (1.0 - std::exp(-phi(z))) * lam * std::exp(-lam * z); },
                         -1.0, 1.0, 200000);
  EXPECT_NEAR(decoration_constant(c, lam, phi, pool), expected, 1e-8);
}

TEST(DecorationConstant, AveragesOverDecorations) {
  std::vector<DecorationSample> pool(2);
  pool[0].measure.atoms = {0.0};
  pool[1].measure.atoms = {0.0, -0.3};
  const double lam = std::sqrt(2.0);
  const auto phi = TestFunction::smoothed_step(0.0, 0.25);
  const double expected = ref::trapezoid(
      [&](double z) {
        const double e0 = std::exp(-phi(z));
        const double e1 = std::exp(-phi(z) - phi(z - 0.3));
        return (1.0 - 0.5 * (e0 + e1)) * lam * std::exp(-lam * z);
      },
      -0.25, 0.25 + 30.0 / lam, 400000);
  EXPECT_NEAR(decoration_constant(1.0, lam, phi, pool), expected, 1e-7);
  EXPECT_THROW(decoration_constant(1.0, lam, phi, {}), EmptyDataError);
}
