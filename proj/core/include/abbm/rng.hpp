#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace abbm {

/// Identifies one random stream: a master seed plus a replica (stream) index.
struct SeedMaterial {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const SeedMaterial&, const SeedMaterial&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-replica random stream. The engine state is derived from
/// (master, stream) alone, so a replica can be reproduced in isolation and
/// replicas can be simulated in any order or on any thread.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(SeedMaterial seed);
  RandomStream(std::uint64_t master, std::uint64_t stream)
      : RandomStream(SeedMaterial{master, stream}) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() {
    for (;;) {
      const double u = uniform();
      if (u > 0.0) return u;
    }
  }

  double normal() { return normal_(engine_); }

  double exponential(double rate) { return exponential_(engine_) / rate; }

  std::uint64_t poisson(double mean);

  const SeedMaterial& seed() const noexcept { return seed_; }

 private:
  SeedMaterial seed_;
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
  boost::random::exponential_distribution<double> exponential_;
};

}  // namespace abbm
