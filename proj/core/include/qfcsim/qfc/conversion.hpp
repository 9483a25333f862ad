#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfcsim/core/timetag.hpp"

namespace qfcsim::qfc {

// Difference-frequency converter, filter stack and telecom detector.
//
// The efficiency law is eta_max * sin^2(sqrt(alpha_L2_per_W * P)) with the
// crystal length folded into alpha_L2_per_W. Transmission factors multiply in
// this order along the signal path: coating (free-space outcoupling optics),
// output_coupling (collimator into fiber, including the filter stack),
// launch (visible fiber into the converter), fiber (links and connectors),
// detector. noise_density_slope is the detector-corrected SPDC density per
// pump watt; the detected noise rate multiplies T_FBG and eta_snspd back in.
struct ConversionConfig {
  double lambda_in_m = 619e-9;
  double lambda_pump_m = 1064e-9;
  double eta_max = 1.0;
  double alpha_L2_per_W = 1.6272949400825943e-3;
  double pump_power_W = 350.0;
  double acceptance_fwhm_hz = 120.4025e9;
  double input_detuning_hz = 0.0;  // residual after pump retuning
  double noise_density_slope_cts_s_pm_per_W = 2.2 / 360.0;
  double noise_spectral_slope_per_GHz = 0.0;  // relative density change per GHz of filter offset
  double filter_center_detuning_hz = 0.0;
  double filter_fwhm_pm = 36.5;
  double t_fbg = 0.81;  // 1 when the FBG is not in the stack
  double coating_transmission = 0.92;
  double output_coupling = 1.0;
  double launch_transmission = 0.5;
  double fiber_transmission = 1.0;
  double eta_snspd = 0.75;
  double dark_count_cps = 10.0;
  double fiber_noise_cps = 0.0;
  double snspd_jitter_ps_fwhm = 50.0;

  friend bool operator==(const ConversionConfig&, const ConversionConfig&) = default;
};

void validate(const ConversionConfig& config);

// Energy conservation: 1/lambda_out = 1/lambda_in - 1/lambda_pump. Throws
// DomainError unless lambda_pump > lambda_in > 0.
double wavelength_out(double lambda_in_m, double lambda_pump_m);

double efficiency_at_power(const ConversionConfig& config, double pump_power_W);

// Half-maximum argument of sinc^2: sinc^2(x) = 1/2.
inline constexpr double kSincSquaredHalfMaxArg = 1.3915573782515103;

// Normalized sinc^2 phase-matching acceptance, 1 at zero detuning and 1/2 at
// +-acceptance_fwhm_hz / 2.
double spectral_acceptance(const ConversionConfig& config, double detuning_hz);

// Internal efficiency at the configured pump power and residual detuning.
double internal_efficiency(const ConversionConfig& config);
// Fiber-coupled efficiency: internal * coating * output_coupling.
double external_efficiency(const ConversionConfig& config);

// Probability that an input photon leaves the chain as a detection.
double signal_survival(const ConversionConfig& config);

// Detected SPDC noise rate (cts/s) at the detector.
double detected_spdc_rate(const ConversionConfig& config);
// SPDC + fiber noise + dark counts.
double detected_noise_rate(const ConversionConfig& config);

struct LossFactor {
  std::string name;
  double value = 1.0;
};

struct LossBudget {
  std::vector<LossFactor> factors;
  double product = 1.0;
};

LossBudget loss_budget(const ConversionConfig& config);

// Thins signal tags (channels 0 and 1) by signal_survival, re-applies detector
// jitter, and adds noise and dark counts on channel 0 over [0, duration_ps).
// Sync tags pass through unchanged. Output is time-sorted.
TagStream convert_stream(const TagStream& tags, const ConversionConfig& config,
                         std::uint64_t duration_ps, std::uint64_t seed);

}  // namespace qfcsim::qfc
