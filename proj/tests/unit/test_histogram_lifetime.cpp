#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qfcsim/analysis/histogram.hpp"
#include "qfcsim/analysis/lifetime.hpp"
#include "qfcsim/core/errors.hpp"

using namespace qfcsim;
using namespace qfcsim::analysis;

namespace {

constexpr std::uint64_t kPeriod = 1'000'000;

// Builds a raw histogram with counts = round(A exp(-t/tau) + B) at bin centers.
Histogram model_histogram(double a, double tau_ns, double b, std::uint64_t width, std::uint64_t window,
                          std::mt19937_64* rng = nullptr) {
  Histogram h;
  h.period_ps = kPeriod;
  for (std::uint64_t e = 0; e <= window; e += width) h.bin_edges_ps.push_back(e);
  for (std::size_t i = 0; i + 1 < h.bin_edges_ps.size(); ++i) {
    const double t = 0.5 * static_cast<double>(h.bin_edges_ps[i] + h.bin_edges_ps[i + 1]);
    const double mu = a * std::exp(-t / (tau_ns * 1e3)) + b;
    if (rng) {
      h.counts.push_back(std::poisson_distribution<std::uint64_t>(mu)(*rng));
    } else {
      h.counts.push_back(static_cast<std::uint64_t>(std::llround(mu)));
    }
  }
  return h;
}

FitResult fit_with(double a, double b) {
  FitResult f;
  f.names = {"A", "tau_ns", "B"};
  f.params = {a, 7.5, b};
  f.sigmas = {0, 0, 0};
  return f;
}

}  // namespace

TEST(Histogram, FoldsOntoPeriod) {
  TagStream tags{{Channel::kSignal, kPeriod + 3000}};
  const auto h = histogram_vs_pulse(tags, 1e6, 100, 100'000);
  ASSERT_EQ(h.size(), 1000u);
  EXPECT_EQ(h.counts[30], 1u);
  EXPECT_EQ(h.total(), 1u);
  EXPECT_DOUBLE_EQ(h.bin_center_ps(30), 3050.0);
}

TEST(Histogram, ConservesCountsAndIgnoresSync) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> u(0, 10'000 * kPeriod);
  TagStream tags;
  for (int i = 0; i < 100'000; ++i) tags.push_back({Channel::kSignal, u(rng)});
  for (int i = 0; i < 100; ++i) tags.push_back({Channel::kSync, i * kPeriod});
  sort_tags(tags);
  const auto h = histogram_vs_pulse(tags, 1e6, 1000, kPeriod);
  EXPECT_EQ(h.total(), 100'000u);

  // Uniform offsets give a flat histogram.
  const double expected = 100'000.0 / static_cast<double>(h.size());
  double chi2 = 0;
  for (auto c : h.counts) chi2 += std::pow(static_cast<double>(c) - expected, 2) / expected;
  const double dof = static_cast<double>(h.size() - 1);
  EXPECT_NEAR(chi2, dof, 5 * std::sqrt(2 * dof));
}

TEST(Histogram, CountsPerSecondNormalization) {
  TagStream tags{{Channel::kSignal, 10}, {Channel::kSignal, kPeriod + 20}};
  const auto h = histogram_vs_pulse(tags, 1e6, 1000, 100'000, 2.0);
  EXPECT_EQ(h.normalization, Normalization::kCountsPerSecond);
  // 2 counts / 2 s * (1e6 / 1e3)
  EXPECT_DOUBLE_EQ(h.value(0), 1000.0);
}

TEST(Histogram, RejectsBadBinning) {
  TagStream tags{{Channel::kSignal, 10}};
  EXPECT_THROW(histogram_vs_pulse(tags, 1e6, 300, 1000), DomainError);
  EXPECT_THROW(histogram_vs_pulse(tags, 1e6, 100, 2 * kPeriod), DomainError);
  EXPECT_THROW(histogram_vs_pulse(tags, 1e6, 0, 1000), DomainError);
}

TEST(Lifetime, ExactCurveRecovered) {
  const auto h = model_histogram(1e10, 7.47, 2e8, 100, 100'000);
  const auto fit = fit_exponential(h);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.param("tau_ns") / 7.47, 1.0, 1e-6);
  EXPECT_NEAR(fit.param("A") / 1e10, 1.0, 1e-6);
  EXPECT_NEAR(fit.param("B") / 2e8, 1.0, 1e-6);
}

TEST(Lifetime, RandomExactCurvesRecovered) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(1e9, 1e11), ut(1.0, 20.0), ub(0.001, 0.3);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = ua(rng), tau = ut(rng), b = a * ub(rng);
    const auto h = model_histogram(a, tau, b, 100, 200'000);
    const auto fit = fit_exponential(h);
    EXPECT_NEAR(fit.param("tau_ns") / tau, 1.0, 1e-6) << "trial " << trial;
    EXPECT_NEAR(fit.param("A") / a, 1.0, 1e-6);
    EXPECT_NEAR(fit.param("B") / b, 1.0, 1e-6);
  }
}

TEST(Lifetime, UncertaintyCoverage) {
  std::mt19937_64 rng(2024);
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = model_histogram(2430, 7.58, 102, 100, 100'000, &rng);
    const auto fit = fit_exponential(h);
    if (std::abs(fit.param("tau_ns") - 7.58) < 2 * fit.sigma("tau_ns")) ++covered;
  }
  EXPECT_GE(covered, 90);
}

TEST(Lifetime, ScalesToNormalization) {
  auto h = model_histogram(1e10, 7.47, 2e8, 100, 100'000);
  h.normalization = Normalization::kCountsPerSecond;
  h.acquisition_s = 10.0;
  const auto fit = fit_exponential(h);
  EXPECT_NEAR(fit.param("B") / (2e8 / 10.0 * 1e4), 1.0, 1e-6);
}

TEST(Lifetime, TooFewBinsThrows) {
  Histogram h;
  h.period_ps = kPeriod;
  h.bin_edges_ps = {0, 100, 200, 300};
  h.counts = {5, 0, 2};
  EXPECT_THROW(fit_exponential(h), EstimatorError);
}

TEST(Snr, Examples) {
  EXPECT_NEAR(snr_after_pulse(fit_with(2472, 1)), 2472, 1e-12);
  EXPECT_NEAR(snr_after_pulse(fit_with(5, 5)), 1, 1e-12);
  EXPECT_NEAR(snr_after_pulse(fit_with(2430, 102)), 23.8, 0.05);
  EXPECT_EQ(snr_after_pulse(fit_with(10, 0)), std::numeric_limits<double>::infinity());
}
