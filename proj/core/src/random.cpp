#include "qfcsim/core/random.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <limits>

namespace qfcsim {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) noexcept {
  // FNV-1a over the purpose tag, then mixed with the seed.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

RandomStream::RandomStream(RngSeedContract contract)
    : engine_(splitmix64(splitmix64(contract.seed) ^ contract.block_index ^ 0x5A17C0DE5EEDULL)) {}

double RandomStream::uniform() {
  boost::random::uniform_01<double> u;
  return u(engine_);
}

double RandomStream::uniform_open0() { return 1.0 - uniform(); }

double RandomStream::exponential(double mean) {
  boost::random::exponential_distribution<double> d(1.0 / mean);
  return d(engine_);
}

double RandomStream::normal(double mean, double stddev) {
  if (stddev == 0.0) {
    return mean;
  }
  boost::random::normal_distribution<double> d(mean, stddev);
  return d(engine_);
}

std::uint64_t RandomStream::poisson(double mean) {
  if (mean <= 0.0) {
    return 0;
  }
  boost::random::poisson_distribution<std::uint64_t, double> d(mean);
  return d(engine_);
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

std::uint64_t RandomStream::geometric_failures(double p) {
  if (p >= 1.0) {
    return 0;
  }
  if (p <= 0.0) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  const double k = std::floor(std::log(uniform_open0()) / std::log1p(-p));
  if (k >= 1.8e19) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(k);
}

}  // namespace qfcsim
