#pragma once

#include <cstdint>
#include <optional>

namespace qfcsim::analysis {

struct CredibleInterval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double v) const noexcept { return v >= low && v <= high; }
};

// Highest-posterior-density interval for a Poisson rate observed as `counts`
// in `duration_s`, flat prior on rate >= 0, i.e. Gamma(counts + 1, duration_s)
// posterior. For counts == 0 this is [0, -ln(1 - credibility) / duration_s].
CredibleInterval poisson_rate_interval(std::uint64_t counts, double duration_s,
                                       double credibility = 0.68);

// Noise photon density per unit wavelength (cts/s/pm):
//   (N - dark) / (eta_snspd * filter_fwhm_pm * t_fbg)
// The interval is the HPD interval of the total rate with the dark rate
// subtracted and the result clipped at zero, so it never goes negative.
struct NoiseDensityEstimate {
  double density_cts_s_pm = 0.0;
  CredibleInterval ci68;
  double count_rate_cps = 0.0;
};

struct NoiseMeasurement {
  std::uint64_t counts = 0;
  double duration_s = 0.0;
};

NoiseDensityEstimate noise_density(const NoiseMeasurement& measurement, double eta_snspd,
                                   double filter_fwhm_pm, std::optional<double> t_fbg,
                                   double dark_cps, double credibility = 0.68);

// Convenience form taking an averaged count rate; counts = round(rate * duration).
NoiseDensityEstimate noise_density(double count_rate_cps, double duration_s, double eta_snspd,
                                   double filter_fwhm_pm, std::optional<double> t_fbg,
                                   double dark_cps, double credibility = 0.68);

// Fraction of input photons that survived a lossy channel, with the HPD
// interval of the Beta(k + 1, n - k + 1) posterior.
struct FractionEstimate {
  double value = 0.0;
  CredibleInterval ci68;
};
FractionEstimate survival_fraction(std::uint64_t survived, std::uint64_t total,
                                   double credibility = 0.68);

}  // namespace qfcsim::analysis
