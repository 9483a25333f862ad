#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qfcsim/analysis/efficiency.hpp"
#include "qfcsim/core/errors.hpp"

using namespace qfcsim;
using namespace qfcsim::analysis;

namespace {

double sinc2(double x) { return x == 0 ? 1.0 : std::pow(std::sin(x) / x, 2); }

// sinc^2 with the given FWHM, via the half-maximum argument found by bisection.
double half_max_arg() {
  double lo = 0.1, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (sinc2(m) > 0.5 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

std::vector<AcceptancePoint> sinc2_scan(double fwhm_ghz, double step_ghz, double span_ghz) {
  const double k = 2 * half_max_arg() / fwhm_ghz;
  std::vector<AcceptancePoint> pts;
  for (double d = -span_ghz; d <= span_ghz + 1e-9; d += step_ghz) {
    pts.push_back({d * 1e9, 0.48 * sinc2(k * d)});
  }
  return pts;
}

std::vector<EfficiencyPoint> sine_curve(double eta_max, double alpha) {
  std::vector<EfficiencyPoint> pts;
  for (double p = 0; p <= 360; p += 20) {
    pts.push_back({p, eta_max * std::pow(std::sin(std::sqrt(alpha * p)), 2), std::nullopt});
  }
  return pts;
}

}  // namespace

TEST(PhotonNumberEfficiency, WavelengthRatio) {
  EXPECT_NEAR(photon_number_efficiency(1.0, 0.5, 619e-9, 619e-9), 0.5, 1e-15);
  EXPECT_EQ(photon_number_efficiency(1.0, 0.0, 619e-9, 1480e-9), 0.0);
  EXPECT_NEAR(photon_number_efficiency(0.01, 0.0011711, 619e-9, 1480e-9), 0.11711 * 1480.0 / 619.0, 1e-12);
  EXPECT_THROW(photon_number_efficiency(0.0, 0.1, 619e-9, 1480e-9), DomainError);
  EXPECT_THROW(photon_number_efficiency(1.0, -0.1, 619e-9, 1480e-9), DomainError);
}

TEST(InternalEfficiency, CoatingCorrection) {
  const auto c = internal_efficiency(0.4416);
  EXPECT_NEAR(c.value, 0.48, 1e-12);
  EXPECT_FALSE(c.unphysical);
  EXPECT_NEAR(internal_efficiency(0.28, 0.0).value, 0.28, 1e-15);
  EXPECT_TRUE(internal_efficiency(0.95).unphysical);
  EXPECT_THROW(internal_efficiency(0.5, 1.0), DomainError);
}

TEST(EfficiencyCurve, ExactSineRecovered) {
  const double alpha = std::pow(std::asin(std::sqrt(0.48)), 2) / 360.0;
  const auto pts = sine_curve(1.0, alpha);
  const auto fit = fit_efficiency_curve(pts);
  EXPECT_NEAR(fit.sine.param("alpha_L2_per_W") / alpha, 1.0, 1e-6);
  EXPECT_NEAR(fit.sine.param("eta_max"), 1.0, 1e-6);
  EXPECT_FALSE(fit.linear_preferred);
}

TEST(EfficiencyCurve, ExactSineBelowUnity) {
  const auto pts = sine_curve(0.7, 2.5e-3);
  const auto fit = fit_efficiency_curve(pts);
  EXPECT_NEAR(fit.sine.param("eta_max"), 0.7, 1e-6);
  EXPECT_NEAR(fit.sine.param("alpha_L2_per_W"), 2.5e-3, 1e-9);
}

TEST(EfficiencyCurve, LinearDataPrefersLine) {
  std::vector<EfficiencyPoint> pts;
  for (double p = 0; p <= 360; p += 20) pts.push_back({p, 1e-4 * p, 1e-3});
  const auto fit = fit_efficiency_curve(pts);
  EXPECT_TRUE(fit.linear_preferred);
  EXPECT_NEAR(fit.linear.param("slope_per_W"), 1e-4, 1e-9);
}

TEST(EfficiencyCurve, NoisyCurveWithinErrors) {
  const double alpha = std::pow(std::asin(std::sqrt(0.48)), 2) / 360.0;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0, 0.005);
  int covered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto pts = sine_curve(1.0, alpha);
    for (auto& p : pts) {
      p.efficiency += noise(rng);
      p.sigma = 0.005;
    }
    const auto fit = fit_efficiency_curve(pts);
    if (std::abs(fit.sine.param("alpha_L2_per_W") - alpha) < 2 * fit.sine.sigma("alpha_L2_per_W")) ++covered;
  }
  EXPECT_GE(covered, 40);
}

TEST(EfficiencyCurve, DegenerateInputThrows) {
  std::vector<EfficiencyPoint> two{{10, 0.1, {}}, {20, 0.2, {}}};
  EXPECT_THROW(fit_efficiency_curve(two), EstimatorError);
  std::vector<EfficiencyPoint> zeros{{10, 0, {}}, {20, 0, {}}, {30, 0, {}}};
  EXPECT_THROW(fit_efficiency_curve(zeros), EstimatorError);
  std::vector<EfficiencyPoint> one_power{{10, 0.1, {}}, {10, 0.1, {}}, {0, 0, {}}};
  EXPECT_THROW(fit_efficiency_curve(one_power), EstimatorError);
}

TEST(AcceptanceBandwidth, SampledSincSquared) {
  const auto pts = sinc2_scan(120.0, 5.0, 150.0);
  EXPECT_NEAR(acceptance_bandwidth(pts) / 1e9, 70.0, 2.0);
  EXPECT_NEAR(acceptance_bandwidth(pts, 0.5) / 1e9, 120.0, 1.0);
}

TEST(AcceptanceBandwidth, MatchesAnalyticInverseOnFineGrid) {
  // Oracle: full width at level L is 2 x_L / k with sinc^2(x_L) = L.
  for (double level : {0.3, 0.5, 0.8, 0.9}) {
    double lo = 1e-6, hi = std::numbers::pi;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (lo + hi);
      (sinc2(m) > level ? lo : hi) = m;
    }
    const double k = 2 * half_max_arg() / 120.0;
    const double expected = 2 * lo / k;
    const auto pts = sinc2_scan(120.0, 0.05, 200.0);
    EXPECT_NEAR(acceptance_bandwidth(pts, level) / 1e9, expected, 0.01) << "level " << level;
  }
}

TEST(AcceptanceBandwidth, NoCrossingThrows) {
  std::vector<AcceptancePoint> flat{{-10e9, 0.5}, {0, 0.5}, {10e9, 0.5}};
  EXPECT_THROW(acceptance_bandwidth(flat), EstimatorError);
  std::vector<AcceptancePoint> one_sided{{0, 1.0}, {10e9, 0.9}, {20e9, 0.1}};
  EXPECT_THROW(acceptance_bandwidth(one_sided), EstimatorError);
}
