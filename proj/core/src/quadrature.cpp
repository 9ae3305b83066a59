#include "abbm/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "abbm/errors.hpp"

namespace abbm {

namespace {

constexpr unsigned kMaxDepth = 20;

QuadratureResult run(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, kMaxDepth, 1e-11, &error, &l1);
  if (!std::isfinite(value) || error > abs_tol)
    throw NumericError(fmt::format("quadrature on [{}, {}] did not reach tolerance {} (error {})", a,
                                   b, abs_tol, error));
  return {value, error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol) {
  if (!(a < b)) {
    if (a == b) return {};
    throw DomainError("integration bounds must satisfy a <= b");
  }
  return run(f, a, b, abs_tol);
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double abs_tol) {
  auto mapped = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double v = 1.0 - u;
    const double value = f(a + u / v);
    return value == 0.0 ? 0.0 : value / (v * v);
  };
  return run(mapped, 0.0, 1.0, abs_tol);
}

}  // namespace abbm
