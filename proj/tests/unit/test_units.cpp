#include <gtest/gtest.h>

#include <random>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/core/units.hpp"

using namespace qfcsim;

TEST(Units, FbgBandwidthAt1480nmIs36p5pm) {
  EXPECT_NEAR(freq_bandwidth_to_wavelength(5e9, 1480e-9) / kPicometer, 36.5, 0.1);
}

TEST(Units, FortyGigahertzAt1480nm) {
  // 1480e-9^2 * 40e9 / 299792458 = 292.2555 pm
  EXPECT_NEAR(freq_bandwidth_to_wavelength(40e9, 1480e-9) / kPicometer, 292.2555, 1e-3);
}

TEST(Units, BandwidthIsLinearAndVanishesWithDeltaNu) {
  const double base = freq_bandwidth_to_wavelength(1e9, 1480e-9);
  EXPECT_NEAR(freq_bandwidth_to_wavelength(1e-3, 1480e-9), base * 1e-12, 1e-30);
  EXPECT_DOUBLE_EQ(freq_bandwidth_to_wavelength(3e9, 1480e-9), 3.0 * base);
}

TEST(Units, NonPositiveInputsAreDomainErrors) {
  EXPECT_THROW(freq_bandwidth_to_wavelength(0.0, 1480e-9), DomainError);
  EXPECT_THROW(freq_bandwidth_to_wavelength(5e9, -1.0), DomainError);
  EXPECT_THROW(Wavelength::meters(0.0), DomainError);
  EXPECT_THROW(Frequency::hertz(-5.0), DomainError);
}

TEST(Units, WavelengthFrequencyRoundTripIsInvolution) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> log_lambda(-8.0, -5.0);
  for (int i = 0; i < 10000; ++i) {
    const auto lambda = Wavelength::meters(std::pow(10.0, log_lambda(gen)));
    const auto nu = lambda.to_frequency();
    EXPECT_NEAR(lambda.meters() * nu.hertz() / kSpeedOfLight, 1.0, 1e-12);
    EXPECT_NEAR(nu.to_wavelength().meters() / lambda.meters(), 1.0, 1e-12);
  }
}

TEST(Units, BandwidthConversionsInvert) {
  const double dl = freq_bandwidth_to_wavelength(5e9, 1480e-9);
  EXPECT_NEAR(wavelength_bandwidth_to_freq(dl, 1480e-9), 5e9, 1e-3);
}
