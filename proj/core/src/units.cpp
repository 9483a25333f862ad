#include "qfcsim/core/units.hpp"

#include <cmath>
#include <string>

#include "qfcsim/core/errors.hpp"

namespace qfcsim {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

Wavelength Wavelength::meters(double m) {
  require_positive(m, "wavelength");
  return Wavelength(m);
}

Frequency Frequency::hertz(double hz) {
  require_positive(hz, "frequency");
  return Frequency(hz);
}

Frequency Wavelength::to_frequency() const noexcept { return Frequency::hertz(kSpeedOfLight / m_); }

Wavelength Frequency::to_wavelength() const noexcept { return Wavelength::meters(kSpeedOfLight / hz_); }

double freq_bandwidth_to_wavelength(double delta_nu_hz, double center_lambda_m) {
  require_positive(delta_nu_hz, "frequency bandwidth");
  require_positive(center_lambda_m, "center wavelength");
  return center_lambda_m * center_lambda_m * delta_nu_hz / kSpeedOfLight;
}

double wavelength_bandwidth_to_freq(double delta_lambda_m, double center_lambda_m) {
  require_positive(delta_lambda_m, "wavelength bandwidth");
  require_positive(center_lambda_m, "center wavelength");
  return kSpeedOfLight * delta_lambda_m / (center_lambda_m * center_lambda_m);
}

}  // namespace qfcsim
