#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/qfc/conversion.hpp"

using namespace qfcsim;
using namespace qfcsim::qfc;

namespace {

// Independent bisection for sinc^2(x) = level on (0, pi).
double sinc2_root(double level) {
  double lo = 1e-9, hi = std::numbers::pi - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = std::pow(std::sin(mid) / mid, 2);
    (v > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ConversionConfig unit_chain() {
  ConversionConfig c;
  c.coating_transmission = 1;
  c.output_coupling = 1;
  c.launch_transmission = 1;
  c.fiber_transmission = 1;
  c.eta_snspd = 1;
  return c;
}

}  // namespace

TEST(Wavelength, SnVToTelecom) {
  EXPECT_NEAR(wavelength_out(619e-9, 1064e-9) * 1e9, 1480.0, 0.5);
}

TEST(Wavelength, HandEvaluatedCases) {
  EXPECT_NEAR(wavelength_out(500e-9, 1000e-9), 1000e-9, 1e-21);
  // 619 * 1063.8 / (1063.8 - 619) nm
  EXPECT_NEAR(wavelength_out(619e-9, 1063.8e-9) * 1e9, 658492.2 / 444.8, 1e-9);
}

TEST(Wavelength, EnergyConservation) {
  for (double lp = 700e-9; lp < 3000e-9; lp += 37e-9) {
    const double lo = wavelength_out(619e-9, lp);
    EXPECT_NEAR((1 / lo + 1 / lp) * 619e-9, 1.0, 1e-12);
  }
}

TEST(Wavelength, PumpMustBeLonger) {
  EXPECT_THROW(wavelength_out(619e-9, 619e-9), DomainError);
  EXPECT_THROW(wavelength_out(1064e-9, 619e-9), DomainError);
  EXPECT_THROW(wavelength_out(0.0, 619e-9), DomainError);
}

TEST(Efficiency, ZeroPumpGivesZero) { EXPECT_EQ(efficiency_at_power(ConversionConfig{}, 0.0), 0.0); }

TEST(Efficiency, CalibratedPointAt360W) {
  // Oracle: invert 0.48 = sin^2(sqrt(a * 360)).
  const double alpha = std::pow(std::asin(std::sqrt(0.48)), 2) / 360.0;
  EXPECT_NEAR(alpha, 1.628e-3, 1e-6);
  ConversionConfig c;
  c.alpha_L2_per_W = alpha;
  c.eta_max = 1.0;
  EXPECT_NEAR(efficiency_at_power(c, 360.0), 0.48, 0.005);
  EXPECT_NEAR(ConversionConfig{}.alpha_L2_per_W, alpha, 1e-15);
}

TEST(Efficiency, SineMaximumGivesEtaMax) {
  ConversionConfig c;
  c.eta_max = 0.73;
  const double p_max = std::pow(std::numbers::pi / 2, 2) / c.alpha_L2_per_W;
  EXPECT_NEAR(efficiency_at_power(c, p_max), 0.73, 1e-14);
}

TEST(Efficiency, MonotoneBelowFirstMaximum) {
  ConversionConfig c;
  const double p_max = std::pow(std::numbers::pi / 2, 2) / c.alpha_L2_per_W;
  double prev = -1;
  for (int i = 0; i <= 1000; ++i) {
    const double v = efficiency_at_power(c, p_max * i / 1000.0 * 0.999);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Efficiency, SmallSignalLinearity) {
  ConversionConfig c;
  const double p_lin = 0.01 / c.alpha_L2_per_W;  // sqrt(alpha P) = 0.1
  const double ref = efficiency_at_power(c, p_lin * 1e-6) / (p_lin * 1e-6);
  for (int i = 1; i <= 100; ++i) {
    const double p = p_lin * i / 100.0;
    EXPECT_NEAR(efficiency_at_power(c, p) / p / ref, 1.0, 0.01);
  }
}

TEST(Acceptance, UnityAtZeroAndHalfAtHalfWidth) {
  ConversionConfig c;
  EXPECT_DOUBLE_EQ(spectral_acceptance(c, 0.0), 1.0);
  EXPECT_NEAR(spectral_acceptance(c, c.acceptance_fwhm_hz / 2), 0.5, 1e-12);
  EXPECT_NEAR(kSincSquaredHalfMaxArg, sinc2_root(0.5), 1e-12);
}

TEST(Acceptance, CalibratedWidthGives80PercentAt35GHz) {
  const double x08 = sinc2_root(0.8);
  EXPECT_NEAR(x08, 0.8090279920, 1e-9);
  const double fwhm = 2 * sinc2_root(0.5) / x08 * 35e9;
  EXPECT_NEAR(fwhm / 1e9, 120.4025, 1e-3);
  ConversionConfig c;
  c.acceptance_fwhm_hz = fwhm;
  EXPECT_NEAR(spectral_acceptance(c, 35e9), 0.80, 0.01);
  EXPECT_NEAR(spectral_acceptance(c, -35e9), 0.80, 0.01);
  EXPECT_NEAR(ConversionConfig{}.acceptance_fwhm_hz, fwhm, 1e5);
}

TEST(Acceptance, EvenAndBounded) {
  ConversionConfig c;
  for (double d = 0; d < 1e12; d += 7.3e9) {
    EXPECT_DOUBLE_EQ(spectral_acceptance(c, d), spectral_acceptance(c, -d));
    EXPECT_LE(spectral_acceptance(c, d), 1.0);
    EXPECT_GE(spectral_acceptance(c, d), 0.0);
  }
}

TEST(LossBudget, IdentityAndAnnihilator) {
  auto c = unit_chain();
  c.eta_max = 1.0;
  c.pump_power_W = std::pow(std::numbers::pi / 2, 2) / c.alpha_L2_per_W;
  EXPECT_NEAR(loss_budget(c).product, 1.0, 1e-12);
  c.launch_transmission = 0.0;
  EXPECT_EQ(loss_budget(c).product, 0.0);
}

TEST(LossBudget, OperatingPointRetainsFourPercent) {
  ConversionConfig c;
  c.pump_power_W = 350;
  c.output_coupling = 0.6575844841;
  c.fiber_transmission = 0.3756909927;
  const auto budget = loss_budget(c);
  EXPECT_NEAR(budget.product, 0.04, 0.002);
  EXPECT_NEAR(external_efficiency(c), 0.28, 0.01);
  ASSERT_EQ(budget.factors.size(), 6u);
  EXPECT_EQ(budget.factors[3].name, "free_space_launch");
  EXPECT_DOUBLE_EQ(budget.factors[3].value, 0.5);
}

TEST(ConvertStream, SurvivalFractionWithinBinomialBounds) {
  ConversionConfig c;
  c.pump_power_W = 350;
  c.output_coupling = 0.6575844841;
  c.fiber_transmission = 0.3756909927;
  c.noise_density_slope_cts_s_pm_per_W = 0;
  c.dark_count_cps = 0;
  TagStream in(500'000);
  for (std::size_t i = 0; i < in.size(); ++i) {
    in[i] = {Channel::kSignal, i * 1'000'000};
  }
  const auto out = convert_stream(in, c, in.size() * 1'000'000, 3);
  const double p = signal_survival(c);
  const double n = static_cast<double>(in.size());
  EXPECT_NEAR(static_cast<double>(out.size()), n * p, 3 * std::sqrt(n * p * (1 - p)));
  EXPECT_TRUE(is_time_sorted(out));
}

TEST(ConvertStream, ZeroPumpAndNoDarkGivesEmptyOutput) {
  ConversionConfig c;
  c.pump_power_W = 0;
  c.dark_count_cps = 0;
  TagStream in{{Channel::kSignal, 10}, {Channel::kSignal, 2000}};
  EXPECT_TRUE(convert_stream(in, c, 1'000'000'000'000ULL, 1).empty());
}

TEST(ConvertStream, NoiseDensityTimesFilterWidth) {
  // 2.2 cts/s/pm * 36.5 pm = 80.3 cts/s of corrected density; the generator
  // applies no further correction, so noise_density inverts it exactly.
  ConversionConfig c = unit_chain();
  c.t_fbg = 1.0;
  c.pump_power_W = 360;
  c.dark_count_cps = 0;
  EXPECT_NEAR(detected_spdc_rate(c), 2.2 * 36.5, 1e-9);
  c.t_fbg = 0.81;
  c.eta_snspd = 0.75;
  EXPECT_NEAR(detected_spdc_rate(c), 2.2 * 36.5 * 0.81 * 0.75, 1e-9);
}

TEST(ConvertStream, NoiseOnlyCountsArePoisson) {
  ConversionConfig c;
  c.pump_power_W = 360;
  const double rate = detected_noise_rate(c);
  const std::uint64_t duration = 2'000'000'000'000ULL;  // 2 s
  const double mean = rate * 2.0;
  std::vector<double> counts;
  for (std::uint64_t trial = 0; trial < 400; ++trial) {
    counts.push_back(static_cast<double>(convert_stream({}, c, duration, 1000 + trial).size()));
  }
  // Pearson chi-square of the trial counts against the Poisson mean and
  // dispersion index: both ~ chi2(n-1) for Poisson data.
  double m = 0;
  for (double v : counts) m += v;
  m /= static_cast<double>(counts.size());
  double d = 0;
  for (double v : counts) d += (v - mean) * (v - mean) / mean;
  const double dof = static_cast<double>(counts.size());
  EXPECT_NEAR(m, mean, 4 * std::sqrt(mean / dof));
  EXPECT_NEAR(d, dof, 4 * std::sqrt(2 * dof));
}

TEST(ConvertStream, SyncTagsPassThroughAndInputMustBeSorted) {
  ConversionConfig c;
  c.pump_power_W = 0;
  c.dark_count_cps = 0;
  TagStream in{{Channel::kSync, 0}, {Channel::kSync, 1'000'000}};
  EXPECT_EQ(convert_stream(in, c, 2'000'000, 1), in);
  TagStream unsorted{{Channel::kSignal, 50}, {Channel::kSignal, 10}};
  EXPECT_THROW(convert_stream(unsorted, c, 100, 1), DomainError);
}

TEST(ConvertStream, InvalidConfig) {
  ConversionConfig c;
  c.eta_snspd = 1.5;
  EXPECT_THROW(convert_stream({}, c, 100, 1), ConfigError);
  c = ConversionConfig{};
  c.lambda_pump_m = 500e-9;
  EXPECT_THROW(validate(c), ConfigError);
}
