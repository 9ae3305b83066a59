#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "abbm/rng.hpp"

namespace abbm {

/// Offspring distribution {p_k, k >= 1} with finite support. p_0 is not
/// representable: every branching event produces at least one child.
class OffspringLaw {
 public:
  /// probabilities[k] = p_k. Throws ParameterError for k < 1, negative mass,
  /// total mass != 1 (1e-12), or mean <= 1.
  static OffspringLaw from_probabilities(const std::map<int, double>& probabilities);

  /// Binary splitting, p_2 = 1.
  static OffspringLaw dyadic();

  double probability(int k) const;
  int max_offspring() const noexcept { return static_cast<int>(p_.size()); }
  double mean() const noexcept { return mean_; }
  double second_moment() const noexcept { return second_moment_; }
  const std::vector<double>& probabilities() const noexcept { return p_; }

  /// f(s) = sum_k p_k s^k. The polynomial is evaluated for any real s (the wave
  /// solver needs it slightly outside [0,1]); pgf() below enforces the domain.
  double generating_function(double s) const noexcept;

  /// Constant-time draw from the law (alias method). Returns k >= 1.
  int sample(RandomStream& rng) const;

  friend bool operator==(const OffspringLaw& a, const OffspringLaw& b) { return a.p_ == b.p_; }

 private:
  OffspringLaw() = default;
  void build_alias_table();

  std::vector<double> p_;  // p_[k-1] = p_k
  double mean_ = 0.0;
  double second_moment_ = 0.0;
  std::vector<double> alias_threshold_;
  std::vector<int> alias_index_;
};

/// lambda* = sqrt(2 beta (m - 1)).
double lambda_star(double beta, const OffspringLaw& law);

/// Generating function on [0,1]; throws DomainError outside.
double pgf(const OffspringLaw& law, double s);

enum class Frame {
  /// Brownian motion with drift -rho, absorbed at the origin.
  DriftedAbsorbedAtZero,
  /// Driftless Brownian motion, absorbed at the line y = rho s.
  StandardWithMovingBarrier,
  /// Classical branching Brownian motion, no absorption.
  NoBarrier,
};

std::string to_string(Frame frame);
Frame frame_from_string(const std::string& name);

struct ModelParams {
  double beta = 1.0;
  double rho = 0.0;
  double x0 = 1.0;
  Frame frame = Frame::StandardWithMovingBarrier;
  OffspringLaw law = OffspringLaw::dyadic();
  /// Fixed at construction by make(); never recomputed elsewhere.
  double lambda_star = 0.0;

  /// Validates and derives lambda_star. beta must be > 0, x0 > 0 when a
  /// barrier is active.
  static ModelParams make(double beta, double rho, double x0, Frame frame,
                          OffspringLaw law = OffspringLaw::dyadic());

  /// A lone Brownian particle (beta = 0, no branching). lambda_star is set to
  /// 0; functionals that need the speed reject such parameters.
  static ModelParams single_particle(double rho, double x0, Frame frame);

  bool has_barrier() const noexcept { return frame != Frame::NoBarrier; }
  bool branches() const noexcept { return beta > 0.0; }

  /// Drift of the particle motion in the native frame.
  double motion_drift() const noexcept {
    return frame == Frame::DriftedAbsorbedAtZero ? -rho : 0.0;
  }
  /// Slope of the absorbing line in the native frame.
  double barrier_slope() const noexcept {
    return frame == Frame::StandardWithMovingBarrier ? rho : 0.0;
  }
  /// Drift subtracted in the centering: rho in the drifted frame, 0 otherwise.
  double centering_drift() const noexcept {
    return frame == Frame::DriftedAbsorbedAtZero ? rho : 0.0;
  }
};

/// m_t = (lambda* - rho_eff) t - 3/(2 lambda*) log t. Throws DomainError for
/// t <= 0 and StateError when lambda* = 0.
double centering(double t, const ModelParams& params);
double centering(double t, double lambda_star, double centering_drift = 0.0);

/// Continuous, non-negative, bounded, piecewise-linear function that vanishes
/// left of its first breakpoint and is constant right of its last one.
class TestFunction {
 public:
  /// Breakpoints must be strictly increasing, values >= 0, and the first value
  /// must be 0 so the function is continuous at the support edge.
  TestFunction(std::string name, std::vector<double> breakpoints, std::vector<double> values);

  /// Smoothed indicator of [a, inf): ramps linearly from 0 at a - delta to
  /// height at a.
  static TestFunction smoothed_step(double a, double delta = 0.25, double height = 1.0);
  /// Tent with apex height at center, vanishing outside (center -+ half_width).
  static TestFunction tent(double center, double half_width, double height = 1.0);
  /// Constant level on [a, inf), ramped over [a - delta, a]; meant for small
  /// levels where the Laplace functional is far from saturation.
  static TestFunction constant_half_line(double a, double level, double delta = 0.25);
  static TestFunction zero();

  double operator()(double x) const noexcept;
  double support_left() const noexcept { return breakpoints_.front(); }
  double sup() const noexcept { return sup_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const TestFunction& a, const TestFunction& b) {
    return a.breakpoints_ == b.breakpoints_ && a.values_ == b.values_;
  }

 private:
  std::string name_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double sup_ = 0.0;
};

/// The three shapes every experiment uses, keyed "step", "tent", "half".
std::vector<TestFunction> canonical_test_functions(double delta = 0.25);
TestFunction canonical_test_function(const std::string& name, double delta = 0.25);

}  // namespace abbm
