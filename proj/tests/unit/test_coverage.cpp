#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qfcsim/analysis/g2.hpp"
#include "qfcsim/analysis/histogram.hpp"
#include "qfcsim/analysis/lifetime.hpp"
#include "qfcsim/analysis/noise.hpp"

// Frequentist coverage of the reported 68% intervals over 500 seeded trials.

using namespace qfcsim::analysis;

namespace {

constexpr int kTrials = 500;

Histogram poisson_decay(std::mt19937_64& rng, double a, double tau_ns, double b) {
  Histogram h;
  h.period_ps = 1'000'000;
  for (std::uint64_t e = 0; e <= 100'000; e += 100) h.bin_edges_ps.push_back(e);
  for (std::size_t i = 0; i + 1 < h.bin_edges_ps.size(); ++i) {
    const double t = static_cast<double>(h.bin_edges_ps[i]) + 50.0;
    h.counts.push_back(std::poisson_distribution<std::uint64_t>(a * std::exp(-t / (tau_ns * 1e3)) + b)(rng));
  }
  return h;
}

G2Histogram poisson_g2(std::mt19937_64& rng, double asymptote, double a, double tau) {
  G2Histogram h;
  h.max_sep = 60;
  for (std::int64_t n = -60; n <= 60; ++n) {
    const double mu = n == 0 ? 0.3 * asymptote : asymptote * (1 + a * std::exp(-std::abs(static_cast<double>(n)) / tau));
    h.counts.push_back(std::poisson_distribution<std::uint64_t>(mu)(rng));
  }
  double sum = 0;
  for (std::int64_t s = 25; s <= 50; ++s) sum += static_cast<double>(h.counts[h.index(s)] + h.counts[h.index(-s)]);
  h.baseline = sum / 52.0;
  h.baseline_min = 25;
  h.baseline_max = 50;
  for (auto c : h.counts) {
    h.g2.push_back(static_cast<double>(c) / h.baseline);
    h.sigma.push_back(std::sqrt(std::max<double>(static_cast<double>(c), 1.0)) / h.baseline);
  }
  return h;
}

void expect_nominal(int covered, const char* what) {
  const double f = static_cast<double>(covered) / kTrials;
  EXPECT_GE(f, 0.58) << what;
  EXPECT_LE(f, 0.78) << what;
}

}  // namespace

TEST(Coverage, LifetimeTau) {
  std::mt19937_64 rng(1001);
  int covered = 0;
  for (int i = 0; i < kTrials; ++i) {
    const auto fit = fit_exponential(poisson_decay(rng, 2430, 7.58, 102));
    covered += std::abs(fit.param("tau_ns") - 7.58) <= fit.sigma("tau_ns");
  }
  expect_nominal(covered, "tau");
}

TEST(Coverage, BunchingAmplitudeAndTime) {
  std::mt19937_64 rng(1002);
  int cov_a = 0, cov_t = 0;
  for (int i = 0; i < kTrials; ++i) {
    const auto fit = fit_bunching(poisson_g2(rng, 3000, 0.51, 7.5));
    cov_a += std::abs(fit.fit.param("A") - 0.51) <= fit.fit.sigma("A");
    cov_t += std::abs(fit.fit.param("tau_pulses") - 7.5) <= fit.fit.sigma("tau_pulses");
  }
  expect_nominal(cov_a, "A");
  expect_nominal(cov_t, "tau_pulses");
}

TEST(Coverage, NoiseDensity) {
  std::mt19937_64 rng(1003);
  const double eta = 0.75, fwhm = 36.5, tfbg = 0.81, dark = 10, truth = 2.2, t = 20;
  const double rate = truth * eta * fwhm * tfbg + dark;
  int covered = 0;
  for (int i = 0; i < kTrials; ++i) {
    const auto k = std::poisson_distribution<std::uint64_t>(rate * t)(rng);
    covered += noise_density(NoiseMeasurement{k, t}, eta, fwhm, tfbg, dark).ci68.contains(truth);
  }
  expect_nominal(covered, "noise density");
}

TEST(Coverage, SurvivalFraction) {
  std::mt19937_64 rng(1004);
  int covered = 0;
  for (int i = 0; i < kTrials; ++i) {
    const auto k = std::binomial_distribution<std::uint64_t>(10'000, 0.04)(rng);
    covered += survival_fraction(k, 10'000).ci68.contains(0.04);
  }
  expect_nominal(covered, "survival fraction");
}
