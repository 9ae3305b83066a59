#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace abbm {

/// Neumaier-compensated sum. merge() is exact up to the compensation error, so
/// folding partial sums in any order agrees to ~1e-15 relative.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void merge(const NeumaierSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// A Monte Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t n = 0;
  double confidence = 0.95;

  double half_width() const;
  /// |value - target| <= k * se.
  bool within(double target, double k) const { return std::abs(value - target) <= k * se; }
};

/// Count, sum and sum of squares with compensated accumulation.
class Accumulator {
 public:
  void add(double x) noexcept {
    ++n_;
    sum_.add(x);
    sum_sq_.add(x * x);
  }
  void merge(const Accumulator& other) noexcept {
    n_ += other.n_;
    sum_.merge(other.sum_);
    sum_sq_.merge(other.sum_sq_);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return n_ ? sum_.value() / static_cast<double>(n_) : 0.0; }
  double variance() const noexcept;
  /// Mean with SE = sd / sqrt(n); SE is 0 when n < 2.
  Estimate estimate() const noexcept;

 private:
  std::size_t n_ = 0;
  NeumaierSum sum_;
  NeumaierSum sum_sq_;
};

Estimate mean_estimate(std::span<const double> values);

/// Binomial proportion with SE sqrt(p(1-p)/n).
Estimate proportion_estimate(std::size_t successes, std::size_t n);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS distance between samples and a continuous CDF.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS test (asymptotic p-value with the Stephens correction).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Cramer-von Mises W^2 between samples and a continuous CDF.
double cramer_von_mises(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Least-squares slope of y on x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);
double median(std::vector<double> values);

}  // namespace abbm
