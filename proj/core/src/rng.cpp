#include "abbm/rng.hpp"

#include <array>

namespace abbm {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(SeedMaterial seed) {
  // Two rounds of splitmix over (master, stream) give well-separated seed
  // words even for adjacent stream indices.
  const std::uint64_t a = splitmix64(seed.master);
  const std::uint64_t b = splitmix64(a ^ splitmix64(seed.stream + 0x632be59bd9b4e019ULL));
  const std::uint64_t c = splitmix64(b + seed.stream);
  std::array<std::uint32_t, 6> words{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(SeedMaterial seed) : seed_(seed), engine_(make_engine(seed)) {}

std::uint64_t RandomStream::poisson(double mean) {
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(engine_);
}

}  // namespace abbm
