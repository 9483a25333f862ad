#include "qfcsim/io/config_json.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "qfcsim/core/errors.hpp"

namespace qfcsim::io {

namespace {

using nlohmann::json;

// Field table binding JSON keys to struct members.
template <typename Config>
class FieldTable {
 public:
  FieldTable& number(const std::string& key, double Config::*member) {
    readers_[key] = [key, member](Config& c, const json& v) {
      if (!v.is_number()) {
        throw ConfigError("field '" + key + "' must be a number");
      }
      c.*member = v.get<double>();
    };
    writers_.emplace_back([key, member](const Config& c, json& j) { j[key] = c.*member; });
    return *this;
  }

  FieldTable& count(const std::string& key, std::uint64_t Config::*member) {
    readers_[key] = [key, member](Config& c, const json& v) {
      if (v.is_number_unsigned()) {
        c.*member = v.get<std::uint64_t>();
      } else if (v.is_number_float() && v.get<double>() >= 0.0 &&
                 v.get<double>() == std::floor(v.get<double>()) && v.get<double>() < 1.8e19) {
        c.*member = static_cast<std::uint64_t>(v.get<double>());
      } else {
        throw ConfigError("field '" + key + "' must be a non-negative integer");
      }
    };
    writers_.emplace_back([key, member](const Config& c, json& j) { j[key] = c.*member; });
    return *this;
  }

  FieldTable& flag(const std::string& key, bool Config::*member) {
    readers_[key] = [key, member](Config& c, const json& v) {
      if (!v.is_boolean()) {
        throw ConfigError("field '" + key + "' must be a boolean");
      }
      c.*member = v.get<bool>();
    };
    writers_.emplace_back([key, member](const Config& c, json& j) { j[key] = c.*member; });
    return *this;
  }

  Config read(const json& j, const char* what) const {
    if (!j.is_object()) {
      throw ConfigError(std::string(what) + " must be a JSON object");
    }
    Config c;
    for (const auto& [key, value] : j.items()) {
      const auto it = readers_.find(key);
      if (it == readers_.end()) {
        throw ConfigError(std::string(what) + ": unknown field '" + key + "'");
      }
      it->second(c, value);
    }
    return c;
  }

  json write(const Config& c) const {
    json j = json::object();
    for (const auto& w : writers_) {
      w(c, j);
    }
    return j;
  }

 private:
  std::map<std::string, std::function<void(Config&, const json&)>> readers_;
  std::vector<std::function<void(const Config&, json&)>> writers_;
};

const FieldTable<emitter::EmitterConfig>& emitter_fields() {
  using C = emitter::EmitterConfig;
  static const auto table = FieldTable<C>()
                                .number("rep_rate_hz", &C::rep_rate_hz)
                                .count("n_pulses", &C::n_pulses)
                                .number("lifetime_ns", &C::lifetime_ns)
                                .number("p_detect_per_pulse", &C::p_detect_per_pulse)
                                .number("beta", &C::beta)
                                .number("telegraph_tau_pulses", &C::telegraph_tau_pulses)
                                .number("background_rate_cps", &C::background_rate_cps)
                                .flag("background_gated", &C::background_gated)
                                .number("detector_jitter_ps_fwhm", &C::detector_jitter_ps_fwhm);
  return table;
}

const FieldTable<qfc::ConversionConfig>& conversion_fields() {
  using C = qfc::ConversionConfig;
  static const auto table = FieldTable<C>()
                                .number("lambda_in_m", &C::lambda_in_m)
                                .number("lambda_pump_m", &C::lambda_pump_m)
                                .number("eta_max", &C::eta_max)
                                .number("alpha_L2_per_W", &C::alpha_L2_per_W)
                                .number("pump_power_W", &C::pump_power_W)
                                .number("acceptance_fwhm_hz", &C::acceptance_fwhm_hz)
                                .number("input_detuning_hz", &C::input_detuning_hz)
                                .number("noise_density_slope_cts_s_pm_per_W",
                                        &C::noise_density_slope_cts_s_pm_per_W)
                                .number("noise_spectral_slope_per_GHz", &C::noise_spectral_slope_per_GHz)
                                .number("filter_center_detuning_hz", &C::filter_center_detuning_hz)
                                .number("filter_fwhm_pm", &C::filter_fwhm_pm)
                                .number("t_fbg", &C::t_fbg)
                                .number("coating_transmission", &C::coating_transmission)
                                .number("output_coupling", &C::output_coupling)
                                .number("launch_transmission", &C::launch_transmission)
                                .number("fiber_transmission", &C::fiber_transmission)
                                .number("eta_snspd", &C::eta_snspd)
                                .number("dark_count_cps", &C::dark_count_cps)
                                .number("fiber_noise_cps", &C::fiber_noise_cps)
                                .number("snspd_jitter_ps_fwhm", &C::snspd_jitter_ps_fwhm);
  return table;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

emitter::EmitterConfig emitter_config_from_json(const json& j) {
  auto config = emitter_fields().read(j, "emitter");
  emitter::validate(config);
  return config;
}

json to_json(const emitter::EmitterConfig& config) { return emitter_fields().write(config); }

qfc::ConversionConfig conversion_config_from_json(const json& j) {
  auto config = conversion_fields().read(j, "conversion");
  qfc::validate(config);
  return config;
}

json to_json(const qfc::ConversionConfig& config) { return conversion_fields().write(config); }

json to_json(const analysis::FitResult& fit) {
  json params = json::object();
  json sigmas = json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    params[fit.names[i]] = finite_or_null(fit.params[i]);
    sigmas[fit.names[i]] = finite_or_null(fit.sigmas[i]);
  }
  return json{{"params", params},
              {"sigmas", sigmas},
              {"chi2_reduced", finite_or_null(fit.chi2_reduced)},
              {"converged", fit.converged},
              {"n_points", fit.n_points},
              {"flags", fit.flags}};
}

}  // namespace qfcsim::io
