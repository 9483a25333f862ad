#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qfcsim {

// Names one reproducible random substream. Equal contracts give bit-identical
// draws; distinct block_index values under one seed give independent
// substreams, which is what block-partitioned simulation relies on.
struct RngSeedContract {
  std::uint64_t seed = 0;
  std::uint64_t block_index = 0;

  friend bool operator==(const RngSeedContract&, const RngSeedContract&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Derives a purpose-specific seed so that, e.g., the emitter and the converter
// do not consume the same substream when a scenario hands both one seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) noexcept;

// Random source for one substream.
//
// Engine: std::mt19937_64 seeded with splitmix64(splitmix64(seed) ^ block_index
// ^ const). The engine output is fixed by the C++ standard. Distributions come
// from Boost.Random, whose algorithms do not vary between standard library
// implementations the way <random> distributions do.
class RandomStream {
 public:
  explicit RandomStream(RngSeedContract contract);

  // Uniform on [0, 1).
  double uniform();
  // Uniform on (0, 1]; safe to take the log of.
  double uniform_open0();
  double exponential(double mean);
  double normal(double mean, double stddev);
  std::uint64_t poisson(double mean);
  bool bernoulli(double p);
  // Number of failures before the first success of a Bernoulli(p) sequence.
  // Returns UINT64_MAX when p == 0.
  std::uint64_t geometric_failures(double p);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qfcsim
