#pragma once

namespace qfcsim {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact

inline constexpr double kNanometer = 1e-9;
inline constexpr double kPicometer = 1e-12;
inline constexpr double kGigahertz = 1e9;

class Frequency;

/// Vacuum wavelength in meters. Always positive.
class Wavelength {
 public:
  static Wavelength meters(double m);
  static Wavelength nanometers(double nm) { return meters(nm * kNanometer); }

  double meters() const noexcept { return m_; }
  double nanometers() const noexcept { return m_ / kNanometer; }
  double picometers() const noexcept { return m_ / kPicometer; }

  Frequency to_frequency() const noexcept;

  friend bool operator==(const Wavelength&, const Wavelength&) = default;

 private:
  explicit Wavelength(double m) : m_(m) {}
  double m_;
};

/// Optical frequency in hertz. Always positive.
class Frequency {
 public:
  static Frequency hertz(double hz);
  static Frequency gigahertz(double ghz) { return hertz(ghz * kGigahertz); }

  double hertz() const noexcept { return hz_; }
  double gigahertz() const noexcept { return hz_ / kGigahertz; }

  Wavelength to_wavelength() const noexcept;

  friend bool operator==(const Frequency&, const Frequency&) = default;

 private:
  explicit Frequency(double hz) : hz_(hz) {}
  double hz_;
};

// Converts a spectral FWHM given in frequency into the equivalent wavelength
// FWHM at center_lambda: lambda^2 * delta_nu / c. Throws DomainError on
// non-positive inputs.
double freq_bandwidth_to_wavelength(double delta_nu_hz, double center_lambda_m);

// Inverse of freq_bandwidth_to_wavelength.
double wavelength_bandwidth_to_freq(double delta_lambda_m, double center_lambda_m);

}  // namespace qfcsim
