#pragma once

// Closed forms and small solvers written independently of the library, used as
// test oracles.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "abbm/engine.hpp"
#include "abbm/model.hpp"

namespace ref {

inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// P(tau <= r) for BM from x > 0 to the line rho s (reflection principle with
/// Girsanov), evaluated directly.
inline double hitting_cdf(double x, double rho, double r) {
  const double sr = std::sqrt(r);
  return Phi((-x + rho * r) / sr) + std::exp(2.0 * rho * x) * Phi((-x - rho * r) / sr);
}

inline double hitting_density(double x, double rho, double r) {
  return x / std::sqrt(2.0 * std::numbers::pi * r * r * r) *
         std::exp(-(x - rho * r) * (x - rho * r) / (2.0 * r));
}

/// Dyadic, beta = 1, rho = 0: 1/2 g'' = g - g^2 has the solution
/// g(x) = 3/2 sech^2((x + x0)/sqrt 2) with g(0) = 1.
inline double wave_rho0(double x) {
  const double x0 = std::numbers::sqrt2 * std::acosh(std::sqrt(1.5));
  const double c = std::cosh((x + x0) / std::numbers::sqrt2);
  return 1.5 / (c * c);
}

/// g'(0) from the first integral 1/4 g'^2 + g^3/3 - g^2/2 = 0: -sqrt(2/3).
inline double wave_rho0_slope() { return -std::sqrt(2.0 / 3.0); }

/// Trapezoid rule on a uniform grid.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

/// ABK upper-tail form b y exp(-lambda y - y^2/(2t) + 3/(2 lambda) y log t / t).
inline double abk(double y, double t, double b, double lambda) {
  return b * y * std::exp(-lambda * y - y * y / (2.0 * t) + 1.5 / lambda * y * std::log(t) / t);
}

inline std::vector<double> grid(double dt, double horizon) {
  std::vector<double> g;
  for (int k = 1; k * dt <= horizon + 1e-12; ++k) g.push_back(k * dt);
  return g;
}

/// Tail w(t, x) = P(M_t > x) of the maximum of dyadic BBM (beta = 1) from 0,
/// from w_t = 1/2 w_xx + w - w^2 with w(0, x) = 1{x < 0}. Crank-Nicolson
/// diffusion with the exact logistic reaction in a Strang split.
class FkppTail {
 public:
  FkppTail(double left = -15.0, double right = 35.0, double dx = 0.01, double dt = 0.002)
      : left_(left), dx_(dx), dt_(dt) {
    const auto n = static_cast<std::size_t>(std::llround((right - left) / dx)) + 1;
    w_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = left + static_cast<double>(i) * dx;
      w_[i] = x < -1e-12 ? 1.0 : (x > 1e-12 ? 0.0 : 0.5);
    }
  }

  void advance_to(double t) {
    while (t_ + 0.5 * dt_ < t) {
      react(0.5 * dt_);
      diffuse();
      react(0.5 * dt_);
      t_ += dt_;
    }
  }

  double time() const { return t_; }

  /// P(M_t <= x) by linear interpolation.
  double cdf(double x) const {
    const double u = (x - left_) / dx_;
    if (u <= 0.0) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    if (i + 1 >= w_.size()) return 1.0;
    const double f = u - static_cast<double>(i);
    return 1.0 - ((1.0 - f) * w_[i] + f * w_[i + 1]);
  }

  /// E M_t = int_0^inf w dx - int_-inf^0 (1 - w) dx (trapezoid).
  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < w_.size(); ++i) {
      const double x = left_ + (static_cast<double>(i) + 0.5) * dx_;
      const double v = 0.5 * (w_[i] + w_[i + 1]);
      s += x >= 0.0 ? v : v - 1.0;
    }
    return s * dx_;
  }

 private:
  void react(double h) {
    const double e = std::exp(h);
    for (double& v : w_) v = v * e / (1.0 - v + v * e);
  }

  // (I - r/2 A) w_new = (I + r/2 A) w with A the second difference, w = 1 on
  // the left edge and 0 on the right edge.
  void diffuse() {
    const std::size_t n = w_.size();
    const double r = 0.5 * dt_ / (dx_ * dx_);
    std::vector<double> rhs(n), c(n), d(n);
    rhs[0] = 1.0;
    rhs[n - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
      rhs[i] = w_[i] + 0.5 * r * (w_[i - 1] - 2.0 * w_[i] + w_[i + 1]);
    const double a = -0.5 * r, b = 1.0 + r;
    c[0] = 0.0;
    d[0] = rhs[0];
    for (std::size_t i = 1; i < n; ++i) {
      const bool edge = i + 1 == n;
      const double ai = edge ? 0.0 : a, bi = edge ? 1.0 : b, ci = edge ? 0.0 : a;
      const double m = bi - ai * c[i - 1];
      c[i] = ci / m;
      d[i] = (rhs[i] - ai * d[i - 1]) / m;
    }
    w_[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) w_[i] = d[i] - c[i] * w_[i + 1];
  }

  double left_, dx_, dt_, t_ = 0.0;
  std::vector<double> w_;
};

}  // namespace ref
