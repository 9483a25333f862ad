#pragma once

#include <nlohmann/json.hpp>

#include "qfcsim/analysis/least_squares.hpp"
#include "qfcsim/emitter/emitter.hpp"
#include "qfcsim/qfc/conversion.hpp"

namespace qfcsim::io {

// JSON objects use the struct field names. Missing fields keep their defaults;
// unknown fields and wrong types raise ConfigError. The parsed config is
// validated.
emitter::EmitterConfig emitter_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const emitter::EmitterConfig& config);

qfc::ConversionConfig conversion_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const qfc::ConversionConfig& config);

// {"params": {...}, "sigmas": {...}, "chi2_reduced": x, "converged": b, ...}
nlohmann::json to_json(const analysis::FitResult& fit);

}  // namespace qfcsim::io
