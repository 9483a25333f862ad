#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "qfcsim/analysis/g2.hpp"
#include "qfcsim/core/errors.hpp"
#include "qfcsim/emitter/emitter.hpp"

using namespace qfcsim;
using namespace qfcsim::analysis;

namespace {

constexpr std::uint64_t kPeriod = 1'000'000;

TagStream random_arm(std::mt19937_64& rng, std::size_t n, std::uint64_t span, Channel ch) {
  std::uniform_int_distribution<std::uint64_t> u(0, span);
  TagStream out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({ch, u(rng)});
  sort_tags(out);
  return out;
}

G2Histogram exact_histogram(double a, double tau, std::int64_t max_sep, double baseline) {
  G2Histogram h;
  h.max_sep = max_sep;
  h.baseline = baseline;
  for (std::int64_t n = -max_sep; n <= max_sep; ++n) {
    const double v = baseline * (1 + a * std::exp(-std::abs(static_cast<double>(n)) / tau));
    h.counts.push_back(static_cast<std::uint64_t>(std::llround(v)));
    h.g2.push_back(static_cast<double>(h.counts.back()) / baseline);
    h.sigma.push_back(std::sqrt(static_cast<double>(h.counts.back())) / baseline);
  }
  return h;
}

}  // namespace

TEST(PulseIndex, RoundsToNearestPulse) {
  EXPECT_EQ(pulse_index(0, kPeriod), 0);
  EXPECT_EQ(pulse_index(kPeriod / 2 - 1, kPeriod), 0);
  EXPECT_EQ(pulse_index(kPeriod / 2, kPeriod), 1);
  EXPECT_EQ(pulse_index(3 * kPeriod + 7000, kPeriod), 3);
}

TEST(G2, MatchesBruteForcePairCount) {
  std::mt19937_64 rng(9);
  const auto a = random_arm(rng, 10'000, 20'000 * kPeriod, Channel::kSignal);
  const auto b = random_arm(rng, 10'000, 20'000 * kPeriod, Channel::kSecond);
  const std::int64_t max_sep = 60;
  const auto h = g2_pulsed(a, b, 1e6, max_sep);
  std::map<std::int64_t, std::uint64_t> brute;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const auto d = pulse_index(y.time_ps, kPeriod) - pulse_index(x.time_ps, kPeriod);
      if (std::abs(d) <= max_sep) ++brute[d];
    }
  }
  for (std::int64_t n = -max_sep; n <= max_sep; ++n) {
    EXPECT_EQ(h.counts[h.index(n)], brute[n]) << "n=" << n;
  }
}

TEST(G2, IndependentPoissonArmsAreFlat) {
  std::mt19937_64 rng(10);
  const auto a = random_arm(rng, 200'000, 1'000'000 * kPeriod, Channel::kSignal);
  const auto b = random_arm(rng, 200'000, 1'000'000 * kPeriod, Channel::kSecond);
  const auto h = g2_pulsed(a, b, 1e6, 50);
  for (std::int64_t n = -50; n <= 50; ++n) {
    EXPECT_NEAR(h.g2[h.index(n)], 1.0, 5 * h.sigma[h.index(n)]);
  }
}

TEST(G2, PerfectSinglePhotonSourceHasNoZeroDelayCoincidences) {
  emitter::EmitterConfig c;
  c.n_pulses = 2'000'000;
  c.p_detect_per_pulse = 0.05;
  c.background_rate_cps = 0;
  const auto tags = emitter::simulate_emission(c, 12);
  const auto [a, b] = emitter::split_50_50(tags, {12, 1});
  const auto h = g2_pulsed(a, b, 1e6, 50);
  EXPECT_EQ(h.counts[h.index(0)], 0u);
  EXPECT_EQ(h.g2_zero(), 0.0);
}

TEST(G2, EmptyArmThrows) {
  TagStream a{{Channel::kSignal, 100}};
  EXPECT_THROW(g2_pulsed(a, {}, 1e6, 50), EstimatorError);
  EXPECT_THROW(g2_pulsed({}, a, 1e6, 50), EstimatorError);
}

TEST(Bunching, ExactCurveRecovered) {
  std::vector<std::int64_t> n;
  std::vector<double> g;
  for (std::int64_t k = -60; k <= 60; ++k) {
    if (k == 0) continue;
    n.push_back(k);
    g.push_back(1 + 0.51 * std::exp(-std::abs(static_cast<double>(k)) / 7.5));
  }
  const auto fit = fit_bunching(n, g);
  EXPECT_NEAR(fit.fit.param("A"), 0.51, 1e-6);
  EXPECT_NEAR(fit.fit.param("tau_pulses"), 7.5, 1e-6);
  EXPECT_FALSE(fit.fit.flagged("tau_unidentifiable"));
}

TEST(Bunching, ExactCountHistogramRecovered) {
  const auto h = exact_histogram(0.51, 7.5, 60, 1e8);
  const auto fit = fit_bunching(h);
  EXPECT_NEAR(fit.fit.param("A"), 0.51, 1e-5);
  EXPECT_NEAR(fit.fit.param("tau_pulses"), 7.5, 1e-4);
  ASSERT_TRUE(fit.g2_zero.has_value());
  EXPECT_NEAR(*fit.g2_zero, 1.51, 1e-6);
}

TEST(Bunching, FlatDataFlagsTau) {
  std::vector<std::int64_t> n;
  std::vector<double> g, s;
  for (std::int64_t k = 1; k <= 50; ++k) {
    n.push_back(k);
    g.push_back(1.0);
    s.push_back(0.01);
  }
  const auto fit = fit_bunching(n, g, s);
  EXPECT_NEAR(fit.fit.param("A"), 0.0, 1e-6);
  EXPECT_TRUE(fit.fit.flagged("tau_unidentifiable"));
}

TEST(Bunching, TelegraphSimulationRecoversParameters) {
  // Background gated to the bright state keeps the bunching amplitude.
  emitter::EmitterConfig c;
  c.n_pulses = 20'000'000;
  c.p_detect_per_pulse = 0.02;
  c.beta = 0.662;
  c.telegraph_tau_pulses = 7.5;
  c.background_rate_cps = 0;
  const auto tags = emitter::simulate_emission(c, 31);
  const auto [a, b] = emitter::split_50_50(tags, {31, 1});
  const auto h = g2_pulsed(a, b, c.rep_rate_hz, 60);
  const auto fit = fit_bunching(h);
  const double amp = emitter::bunching_amplitude(0.662);
  EXPECT_NEAR(fit.fit.param("A"), amp, 2 * fit.fit.sigma("A") + 1e-3);
  EXPECT_NEAR(fit.fit.param("tau_pulses"), 7.5, 2 * fit.fit.sigma("tau_pulses") + 1e-3);
  EXPECT_EQ(h.counts[h.index(0)], 0u);
}
