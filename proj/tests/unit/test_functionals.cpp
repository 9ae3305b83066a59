#include <cmath>

#include <gtest/gtest.h>

#include "abbm/errors.hpp"
#include "abbm/functionals.hpp"

using namespace abbm;

namespace {

const double kLam = std::sqrt(2.0);

Particle at(double x, std::optional<double> touch = std::nullopt, bool upper = false) {
  Particle p;
  p.position = x;
  p.barrier_first_touch = touch;
  p.upper_line_touched = upper;
  return p;
}

PopulationSnapshot snapshot(double t, std::vector<Particle> ps, BarrierMode mode = BarrierMode::Tag,
                            Frame frame = Frame::StandardWithMovingBarrier, double rho = 0.0) {
  PopulationSnapshot s;
  s.time = t;
  s.frame = frame;
  s.rho = rho;
  s.lambda_star = kLam;
  s.mode = mode;
  s.particles = std::move(ps);
  return s;
}

double w(double x, double t) { return std::exp(kLam * x - 2.0 * t); }

}  // namespace

TEST(Functionals, AdditiveAndDerivative) {
  const auto s = snapshot(2.0, {at(1.0), at(2.5, 0.5), at(-0.5)});
  EXPECT_NEAR(additive_W(s, Restriction::All), w(1.0, 2) + w(2.5, 2) + w(-0.5, 2), 1e-15);
  EXPECT_NEAR(additive_W(s, Restriction::BarrierSurvivors), w(1.0, 2) + w(-0.5, 2), 1e-15);
  const double lt = kLam * 2.0;
  EXPECT_NEAR(derivative_Z(s, Restriction::All),
              (lt - 1.0) * w(1.0, 2) + (lt - 2.5) * w(2.5, 2) + (lt + 0.5) * w(-0.5, 2), 1e-15);
  EXPECT_NEAR(derivative_Z(s, Restriction::BarrierSurvivors),
              (lt - 1.0) * w(1.0, 2) + (lt + 0.5) * w(-0.5, 2), 1e-15);
}

TEST(Functionals, DriftedFrameUsesStandardPositions) {
  const double rho = 0.6, t = 3.0;
  const auto std_snap = snapshot(t, {at(2.0), at(3.5)}, BarrierMode::Kill);
  const auto drift_snap = snapshot(t, {at(2.0 - rho * t), at(3.5 - rho * t)}, BarrierMode::Kill,
                                   Frame::DriftedAbsorbedAtZero, rho);
  auto std_rho = std_snap;
  std_rho.rho = rho;
  EXPECT_NEAR(additive_W(drift_snap, Restriction::BarrierSurvivors),
              additive_W(std_rho, Restriction::BarrierSurvivors), 1e-15);
  EXPECT_NEAR(derivative_Z(drift_snap, Restriction::BarrierSurvivors),
              derivative_Z(std_rho, Restriction::BarrierSurvivors), 1e-14);
}

TEST(Functionals, KillModeRejectsFullPopulation) {
  const auto s = snapshot(1.0, {at(1.0)}, BarrierMode::Kill);
  EXPECT_THROW(additive_W(s, Restriction::All), StateError);
  EXPECT_THROW(derivative_Z(s, Restriction::All), StateError);
  EXPECT_THROW(truncated_Z_s(s, 1.0), StateError);
  EXPECT_NO_THROW(additive_W(s, Restriction::BarrierSurvivors));
  const auto free = snapshot(1.0, {at(1.0)}, BarrierMode::Kill, Frame::NoBarrier);
  EXPECT_NO_THROW(additive_W(free, Restriction::All));
}

TEST(Functionals, TruncatedVIdentity) {
  const double z = 3.0, t = 1.5;
  auto s = snapshot(t, {at(0.2), at(1.7, 0.3), at(2.9), at(-1.0, 1.2)});
  s.upper_line = z;
  const double V = truncated_V(s, z, Restriction::All);
  const double W = additive_W(s, Restriction::All);
  const double Z = derivative_Z(s, Restriction::All);
  EXPECT_NEAR(V, z * W + Z, 1e-13 * V);
  const double Vt = truncated_V(s, z, Restriction::BarrierSurvivors);
  EXPECT_NEAR(Vt, z * additive_W(s, Restriction::BarrierSurvivors) +
                      derivative_Z(s, Restriction::BarrierSurvivors), 1e-13 * Vt);
  EXPECT_GT(V, Vt);
  EXPECT_THROW(truncated_V(s, 2.0, Restriction::All), StateError);
}

TEST(Functionals, TruncatedVDropsUpperTouches) {
  auto s = snapshot(1.0, {at(0.0), at(0.5, std::nullopt, true)});
  s.upper_line = 2.0;
  const double top = 2.0 + kLam;
  EXPECT_NEAR(truncated_V(s, 2.0, Restriction::All), top * w(0.0, 1.0), 1e-15);
}

TEST(Functionals, GapU) {
  EXPECT_DOUBLE_EQ(gap_U(3.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(gap_U(1.0, 1.0 + 1e-12), 0.0);
  EXPECT_THROW(gap_U(1.0, 1.1), NumericError);
}

TEST(Functionals, TruncatedZs) {
  const double t = 4.0;
  const auto s = snapshot(t, {at(1.0), at(2.0, 0.5), at(3.0, 3.0)});
  const double lt = kLam * t;
  EXPECT_NEAR(truncated_Z_s(s, 1.0), (lt - 1.0) * w(1.0, t) + (lt - 3.0) * w(3.0, t), 1e-15);
  EXPECT_NEAR(truncated_Z_s(s, 0.1), derivative_Z(s, Restriction::All), 1e-15);
  EXPECT_NEAR(truncated_Z_s(s, t), derivative_Z(s, Restriction::BarrierSurvivors), 1e-15);
  EXPECT_NEAR(truncated_Z_s(s, 10.0), derivative_Z(s, Restriction::BarrierSurvivors), 1e-15);
}

TEST(Functionals, ExtremalMeasure) {
  const double t = 5.0;
  const auto s = snapshot(t, {at(4.0), at(6.0, 1.0), at(7.0, 4.0)});
  const double m = kLam * t - 1.5 / kLam * std::log(t);
  const auto e = extremal_measure(s);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e.atoms[0], 4.0 - m, 1e-14);
  const auto es = extremal_measure(s, {.truncation_time = 2.0});
  ASSERT_EQ(es.size(), 2u);
  EXPECT_NEAR(*es.max(), 7.0 - m, 1e-14);
  EXPECT_THROW(extremal_measure(snapshot(0.0, {at(1.0)})), DomainError);
}

TEST(Functionals, LaplaceOfMeasure) {
  PointMeasure m{{-3.0, -0.1, 0.0, 2.0}};
  const auto step = TestFunction::smoothed_step(0.0, 0.25, 1.0);
  EXPECT_NEAR(m.integrate(step), 0.6 + 1.0 + 1.0, 1e-15);
  EXPECT_NEAR(laplace(m, step), std::exp(-2.6), 1e-15);
  EXPECT_DOUBLE_EQ(laplace(PointMeasure{}, step), 1.0);
  EXPECT_DOUBLE_EQ(laplace(m, TestFunction::zero()), 1.0);
  EXPECT_FALSE(PointMeasure{}.max().has_value());
}

TEST(Functionals, MaxPosition) {
  const auto s = snapshot(1.0, {at(1.0), at(5.0, 0.2), at(2.0)});
  EXPECT_DOUBLE_EQ(*max_position(s, Restriction::All), 5.0);
  EXPECT_DOUBLE_EQ(*max_position(s, Restriction::BarrierSurvivors), 2.0);
  EXPECT_FALSE(max_position(snapshot(1.0, {}), Restriction::All).has_value());
}

TEST(Functionals, EvaluateCheckpointKillMode) {
  auto s = snapshot(2.0, {at(1.0), at(2.0)}, BarrierMode::Kill);
  s.upper_line = 4.0;
  FunctionalRequest req;
  req.upper_line = 4.0;
  req.truncation_times = {1.0};
  req.test_functions = canonical_test_functions();
  const auto v = evaluate_checkpoint(s, req);
  EXPECT_EQ(v.alive, 2u);
  EXPECT_EQ(v.survivors, 2u);
  EXPECT_TRUE(v.W_tilde && v.Z_tilde && v.V_tilde);
  EXPECT_FALSE(v.W || v.Z || v.V || v.U);
  EXPECT_TRUE(v.Z_s.empty());
  EXPECT_EQ(v.laplace.size(), 3u);
  EXPECT_EQ(v.upper_line_untouched, true);
}

TEST(Functionals, EvaluateCheckpointTagMode) {
  auto s = snapshot(6.0, {at(8.0), at(6.5, 4.5), at(1.0, 1.0)});
  s.upper_line = 6.0;
  FunctionalRequest req;
  req.upper_line = 6.0;
  req.truncation_times = {2.0, 8.0};
  req.late_touch_times = {1.0, 2.0, 6.0};
  req.late_touch_window = 2.0;
  const auto v = evaluate_checkpoint(s, req);
  ASSERT_TRUE(v.W && v.Z && v.V && v.U);
  EXPECT_EQ(v.survivors, 1u);
  EXPECT_NEAR(*v.U, *v.V - *v.V_tilde, 1e-15);
  ASSERT_EQ(v.Z_s.size(), 2u);
  EXPECT_NEAR(v.Z_s[1], *v.Z_tilde, 1e-15);
  const double m = centering(6.0, kLam);
  ASSERT_EQ(v.late_touch.size(), 3u);
  // Touch at 4.5 by a particle at 6.5 >= m - 2; the touch at 1.0 is far below.
  EXPECT_GE(6.5, m - 2.0);
  EXPECT_LT(1.0, m - 2.0);
  EXPECT_TRUE(v.late_touch[0]);
  EXPECT_TRUE(v.late_touch[1]);
  EXPECT_FALSE(v.late_touch[2]);
}
