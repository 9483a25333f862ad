#include "qfcsim/qfc/conversion.hpp"

#include <cmath>
#include <numbers>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/core/random.hpp"

namespace qfcsim::qfc {

namespace {

constexpr double kFwhmToSigma = 0.42466090014400953;

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw ConfigError("conversion: " + message);
  }
}

bool is_fraction(double v) { return v >= 0.0 && v <= 1.0; }

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

void validate(const ConversionConfig& c) {
  require(c.lambda_in_m > 0.0 && c.lambda_pump_m > c.lambda_in_m,
          "need lambda_pump_m > lambda_in_m > 0");
  require(c.eta_max > 0.0 && c.eta_max <= 1.0, "eta_max must lie in (0, 1]");
  require(std::isfinite(c.alpha_L2_per_W) && c.alpha_L2_per_W >= 0.0,
          "alpha_L2_per_W must be non-negative");
  require(std::isfinite(c.pump_power_W) && c.pump_power_W >= 0.0, "pump_power_W must be >= 0");
  require(c.acceptance_fwhm_hz > 0.0, "acceptance_fwhm_hz must be positive");
  require(std::isfinite(c.noise_density_slope_cts_s_pm_per_W) && c.noise_density_slope_cts_s_pm_per_W >= 0.0,
          "noise_density_slope_cts_s_pm_per_W must be >= 0");
  require(std::isfinite(c.noise_spectral_slope_per_GHz), "noise_spectral_slope_per_GHz must be finite");
  require(c.filter_fwhm_pm > 0.0, "filter_fwhm_pm must be positive");
  require(is_fraction(c.t_fbg), "t_fbg must lie in [0, 1]");
  require(is_fraction(c.coating_transmission), "coating_transmission must lie in [0, 1]");
  require(is_fraction(c.output_coupling), "output_coupling must lie in [0, 1]");
  require(is_fraction(c.launch_transmission), "launch_transmission must lie in [0, 1]");
  require(is_fraction(c.fiber_transmission), "fiber_transmission must lie in [0, 1]");
  require(is_fraction(c.eta_snspd), "eta_snspd must lie in [0, 1]");
  require(c.dark_count_cps >= 0.0 && c.fiber_noise_cps >= 0.0, "dark and fiber noise rates must be >= 0");
  require(c.snspd_jitter_ps_fwhm >= 0.0, "snspd_jitter_ps_fwhm must be >= 0");
}

double wavelength_out(double lambda_in_m, double lambda_pump_m) {
  if (!(lambda_in_m > 0.0) || !(lambda_pump_m > lambda_in_m)) {
    throw DomainError("difference frequency needs lambda_pump > lambda_in > 0");
  }
  return 1.0 / (1.0 / lambda_in_m - 1.0 / lambda_pump_m);
}

double efficiency_at_power(const ConversionConfig& config, double pump_power_W) {
  if (pump_power_W < 0.0) {
    throw DomainError("pump power must be non-negative");
  }
  const double s = std::sin(std::sqrt(config.alpha_L2_per_W * pump_power_W));
  return config.eta_max * s * s;
}

double spectral_acceptance(const ConversionConfig& config, double detuning_hz) {
  const double x = 2.0 * kSincSquaredHalfMaxArg * detuning_hz / config.acceptance_fwhm_hz;
  const double s = sinc(x);
  return s * s;
}

double internal_efficiency(const ConversionConfig& config) {
  return efficiency_at_power(config, config.pump_power_W) *
         spectral_acceptance(config, config.input_detuning_hz);
}

double external_efficiency(const ConversionConfig& config) {
  return internal_efficiency(config) * config.coating_transmission * config.output_coupling;
}

double signal_survival(const ConversionConfig& config) { return loss_budget(config).product; }

double detected_spdc_rate(const ConversionConfig& config) {
  const double offset_ghz = config.filter_center_detuning_hz / 1e9;
  const double spectral = std::max(0.0, 1.0 + config.noise_spectral_slope_per_GHz * offset_ghz);
  const double density = config.noise_density_slope_cts_s_pm_per_W * config.pump_power_W * spectral;
  return density * config.filter_fwhm_pm * config.t_fbg * config.eta_snspd;
}

double detected_noise_rate(const ConversionConfig& config) {
  return detected_spdc_rate(config) + config.fiber_noise_cps + config.dark_count_cps;
}

LossBudget loss_budget(const ConversionConfig& config) {
  LossBudget budget;
  budget.factors = {
      {"internal_conversion", internal_efficiency(config)},
      {"coating", config.coating_transmission},
      {"output_coupling", config.output_coupling},
      {"free_space_launch", config.launch_transmission},
      {"fiber_and_connectors", config.fiber_transmission},
      {"detector_efficiency", config.eta_snspd},
  };
  for (const auto& f : budget.factors) {
    budget.product *= f.value;
  }
  return budget;
}

TagStream convert_stream(const TagStream& tags, const ConversionConfig& config,
                         std::uint64_t duration_ps, std::uint64_t seed) {
  validate(config);
  if (!is_time_sorted(tags)) {
    throw DomainError("convert_stream: input tags are not time-sorted");
  }

  const double survival = signal_survival(config);
  const double sigma = config.snspd_jitter_ps_fwhm * kFwhmToSigma;
  RandomStream thinning({seed, 0});
  RandomStream noise({seed, 1});

  TagStream out;
  const double duration_s = static_cast<double>(duration_ps) * 1e-12;
  const double noise_rate = detected_noise_rate(config);
  out.reserve(static_cast<std::size_t>(static_cast<double>(tags.size()) * survival +
                                       noise_rate * duration_s * 1.05 + 64));

  for (const auto& tag : tags) {
    if (tag.channel == Channel::kSync) {
      out.push_back(tag);
      continue;
    }
    if (!thinning.bernoulli(survival)) {
      continue;
    }
    const double t = static_cast<double>(tag.time_ps) + thinning.normal(0.0, sigma);
    out.push_back({tag.channel, t <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(t))});
  }

  const std::uint64_t n_noise = noise.poisson(noise_rate * duration_s);
  const double width = static_cast<double>(duration_ps);
  for (std::uint64_t i = 0; i < n_noise; ++i) {
    out.push_back({Channel::kSignal, static_cast<std::uint64_t>(noise.uniform() * width)});
  }

  sort_tags(out);
  return out;
}

}  // namespace qfcsim::qfc
