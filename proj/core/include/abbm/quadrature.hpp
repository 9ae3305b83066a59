#pragma once

#include <functional>

namespace abbm {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod on [a, b]. Throws NumericError when the error
/// estimate stays above abs_tol.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-8);

/// Integral over [a, inf) through r = a + u/(1-u), u in [0, 1).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double abs_tol = 1e-8);

}  // namespace abbm
