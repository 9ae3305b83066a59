#include "abbm/stats.hpp"

#include <algorithm>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "abbm/errors.hpp"

namespace abbm {

double Estimate::half_width() const {
  const boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 0.5 + 0.5 * confidence) * se;
}

double Accumulator::variance() const noexcept {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double m = sum_.value() / n;
  const double v = (sum_sq_.value() - n * m * m) / (n - 1.0);
  return v > 0.0 ? v : 0.0;
}

Estimate Accumulator::estimate() const noexcept {
  Estimate e;
  e.n = n_;
  e.value = mean();
  e.se = n_ >= 2 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  return e;
}

Estimate mean_estimate(std::span<const double> values) {
  Accumulator acc;
  for (double v : values) acc.add(v);
  return acc.estimate();
}

Estimate proportion_estimate(std::size_t successes, std::size_t n) {
  Estimate e;
  e.n = n;
  if (n == 0) return e;
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  e.value = p;
  e.se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return e;
}

double kolmogorov_sf(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw EmptyDataError("KS test needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptyDataError("two-sample KS needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

double cramer_von_mises(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw EmptyDataError("Cramer-von Mises needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  NeumaierSum s;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = cdf(samples[i]) - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    s.add(r * r);
  }
  return 1.0 / (12.0 * n) + s.value();
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw EmptyDataError("least-squares slope needs at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw DomainError("least-squares slope needs distinct abscissae");
  return sxy / sxx;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double median(std::vector<double> values) {
  if (values.empty()) throw EmptyDataError("median of an empty sample");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(values.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace abbm
