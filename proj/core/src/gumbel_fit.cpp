#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <fmt/format.h>

#include "abbm/errors.hpp"
#include "abbm/gumbel.hpp"
#include "abbm/stats.hpp"

namespace abbm {

namespace {

// G(u) = mean_i exp(-e^u Z_i) on a uniform grid in u, with Z normalised to
// median 1. Outside the grid G is 1 (left) or 0 (right) to double precision.
class LaplaceTable {
 public:
  explicit LaplaceTable(const std::vector<double>& zs) {
    const auto [lo, hi] = std::minmax_element(zs.begin(), zs.end());
    left_ = -std::log(*hi) - 40.0;
    right_ = -std::log(*lo) + std::log(40.0);
    const auto n = static_cast<std::size_t>(std::ceil((right_ - left_) / kStep)) + 1;
    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = std::exp(left_ + static_cast<double>(j) * kStep);
      NeumaierSum sum;
      for (double z : zs) sum.add(std::exp(-s * z));
      values[j] = sum.value() / static_cast<double>(zs.size());
    }
    right_ = left_ + static_cast<double>(n - 1) * kStep;
    spline_ = boost::math::interpolators::cardinal_cubic_b_spline<double>(values.begin(), values.end(),
                                                                        left_, kStep);
  }

  double operator()(double u) const {
    if (u <= left_) return 1.0;
    if (u >= right_) return 0.0;
    return std::clamp(spline_(u), 0.0, 1.0);
  }

 private:
  static constexpr double kStep = 0.01;
  double left_ = 0.0;
  double right_ = 0.0;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline_;
};

}  // namespace

double gumbel_mixture_cdf(double z, double c, double lambda, std::span<const double> zs) {
  if (zs.empty()) throw EmptyDataError("mixture CDF needs at least one Z value");
  const double s = c * std::exp(-lambda * z);
  NeumaierSum sum;
  for (double v : zs) sum.add(std::exp(-s * v));
  return sum.value() / static_cast<double>(zs.size());
}

double sample_gumbel_given_z(double c, double z, double lambda, RandomStream& rng) {
  if (!(c > 0.0) || !(z > 0.0)) throw DomainError("Gumbel draw needs C > 0 and Z > 0");
  const double u = rng.uniform_open();
  return -std::log(-std::log(u) / (c * z)) / lambda;
}

GumbelMixtureFit gumbel_mixture_fit(const std::vector<MaxSample>& samples, double lambda,
                                    const GumbelFitOptions& options) {
  if (!(lambda > 0.0)) throw ParameterError("Gumbel fit needs lambda* > 0");
  std::vector<double> maxima, zs;
  maxima.reserve(samples.size());
  zs.reserve(samples.size());
  GumbelMixtureFit fit;
  fit.lambda_star = lambda;
  fit.z_source = options.z_source;
  for (const auto& s : samples) {
    if (s.z_proxy > 0.0 && std::isfinite(s.z_proxy) && std::isfinite(s.centered_max)) {
      maxima.push_back(s.centered_max);
      zs.push_back(s.z_proxy);
    } else {
      ++fit.n_dropped;
    }
  }
  if (zs.empty()) throw DomainError("Gumbel fit: every Z proxy is <= 0");
  fit.n_used = zs.size();

  const double scale = median(zs);
  for (double& z : zs) z /= scale;
  const LaplaceTable table(zs);
  std::sort(maxima.begin(), maxima.end());
  const double n = static_cast<double>(maxima.size());

  // Model CDF at the sorted maxima is G(log C - lambda m).
  auto ks = [&](double log_c) {
    ++fit.evaluations;
    double d = 0.0;
    for (std::size_t i = 0; i < maxima.size(); ++i) {
      const double f = table(log_c - lambda * maxima[i]);
      d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
  };

  const double start = std::log(std::log(2.0)) + lambda * median(maxima);
  const auto steps = static_cast<int>(std::ceil(options.scan_half_width / options.scan_step));
  int best = -steps;
  double best_value = std::numeric_limits<double>::infinity();
  for (int j = -steps; j <= steps; ++j) {
    const double v = ks(start + j * options.scan_step);
    if (v < best_value) {
      best_value = v;
      best = j;
    }
  }
  if (best == -steps || best == steps)
    throw NumericError(fmt::format(
        "Gumbel fit: KS minimum at the edge of the log C scan [{}, {}] (KS {})",
        start - steps * options.scan_step, start + steps * options.scan_step, best_value));

  // Golden-section refinement inside the neighbouring scan cells.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = start + (best - 1) * options.scan_step;
  double b = start + (best + 1) * options.scan_step;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = ks(c), fd = ks(d);
  while (b - a > options.tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = ks(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = ks(d);
    }
  }
  double log_c = 0.5 * (a + b);
  double value = ks(log_c);
  if (best_value < value) {
    log_c = start + best * options.scan_step;
    value = best_value;
  }

  fit.log_c_hat = log_c - std::log(scale);
  fit.c_hat = std::exp(fit.log_c_hat);
  fit.ks = value;
  NeumaierSum cvm;
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    const double r = table(log_c - lambda * maxima[i]) - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    cvm.add(r * r);
  }
  fit.cvm = 1.0 / (12.0 * n) + cvm.value();
  return fit;
}

}  // namespace abbm
