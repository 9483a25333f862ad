#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfcsim/core/timetag.hpp"
#include "qfcsim/emitter/emitter.hpp"
#include "qfcsim/qfc/conversion.hpp"
#include "qfcsim/scenario/scenario.hpp"

namespace qfcsim::scenario::detail {

struct StepContext {
  const nlohmann::json& scenario;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::map<std::string, TagStream> stream_cache;
  std::vector<Quantity> quantities;
  // Steps whose stream was empty; their targets are reported, not failed.
  std::vector<std::string> empty_steps;
  // Time tags each stream-consuming step analysed, keyed by step id. A g2
  // step stores both arms (channels 0 and 1).
  std::map<std::string, TagStream> step_streams;

  emitter::EmitterConfig emitter_for(const nlohmann::json& step) const;
  std::optional<qfc::ConversionConfig> conversion_for(const nlohmann::json& step) const;
  // Requires an emitter; converts when a conversion config is in scope and
  // the step's "source" is not "emitted".
  const TagStream& stream_for(const nlohmann::json& step);

  void emit(const std::string& step, const std::string& name, double value,
            std::optional<double> sigma = std::nullopt);
};

// Throws ConfigError for unknown kinds or fields, EstimatorError on failed fits.
void run_step(StepContext& ctx, const nlohmann::json& step, const std::string& id);

}  // namespace qfcsim::scenario::detail
