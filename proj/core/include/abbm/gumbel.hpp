#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "abbm/estimators.hpp"
#include "abbm/rng.hpp"

namespace abbm {

struct GumbelFitOptions {
  /// Half-width of the coarse log C scan around the Gumbel starting point.
  double scan_half_width = 20.0;
  double scan_step = 0.05;
  double tolerance = 1e-10;
  std::string z_source = "Z_tilde";
};

struct GumbelMixtureFit {
  double c_hat = 0.0;
  double log_c_hat = 0.0;
  double ks = 1.0;
  double cvm = 0.0;
  std::size_t n_used = 0;
  /// Samples dropped because their Z proxy was not positive.
  std::size_t n_dropped = 0;
  double lambda_star = 0.0;
  std::string z_source;
  std::string method = "ks-min: coarse log-C scan + golden section";
  int evaluations = 0;
};

/// Model CDF (1/n) sum_i exp(-C Z_i e^{-lambda z}).
double gumbel_mixture_cdf(double z, double c, double lambda, std::span<const double> zs);

/// Fits C by minimising the KS distance between the empirical CDF of the
/// centered maxima and the mixture CDF. DomainError if no Z proxy is
/// positive, NumericError if the minimum sits at the edge of the scan.
GumbelMixtureFit gumbel_mixture_fit(const std::vector<MaxSample>& samples, double lambda,
                                    const GumbelFitOptions& options = {});

/// Exact draw from exp(-C z e^{-lambda x}) by inversion.
double sample_gumbel_given_z(double c, double z, double lambda, RandomStream& rng);

}  // namespace abbm
