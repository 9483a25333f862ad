#include <gtest/gtest.h>

#include "qfcsim/analysis/least_squares.hpp"
#include "qfcsim/core/errors.hpp"
#include "qfcsim/io/config_json.hpp"

using namespace qfcsim;
using nlohmann::json;

TEST(ConfigJson, EmitterRoundTrip) {
  emitter::EmitterConfig c;
  c.n_pulses = 12345;
  c.beta = 0.662;
  c.background_gated = true;
  c.background_rate_cps = 22.5;
  const auto back = io::emitter_config_from_json(io::to_json(c));
  EXPECT_EQ(io::to_json(back), io::to_json(c));
  EXPECT_EQ(back.n_pulses, 12345u);
  EXPECT_TRUE(back.background_gated);
}

TEST(ConfigJson, ConversionRoundTrip) {
  qfc::ConversionConfig c;
  c.pump_power_W = 344;
  c.fiber_transmission = 0.3756909927;
  const auto back = io::conversion_config_from_json(io::to_json(c));
  EXPECT_EQ(io::to_json(back), io::to_json(c));
  EXPECT_DOUBLE_EQ(back.fiber_transmission, 0.3756909927);
}

TEST(ConfigJson, MissingFieldsKeepDefaults) {
  const auto c = io::emitter_config_from_json(json::object());
  EXPECT_DOUBLE_EQ(c.lifetime_ns, emitter::EmitterConfig{}.lifetime_ns);
}

TEST(ConfigJson, UnknownFieldRejected) {
  EXPECT_THROW(io::emitter_config_from_json(json{{"lifetme_ns", 7.0}}), ConfigError);
  EXPECT_THROW(io::conversion_config_from_json(json{{"pump", 1.0}}), ConfigError);
}

TEST(ConfigJson, WrongTypesRejected) {
  EXPECT_THROW(io::emitter_config_from_json(json{{"beta", "high"}}), ConfigError);
  EXPECT_THROW(io::emitter_config_from_json(json{{"n_pulses", -5}}), ConfigError);
  EXPECT_THROW(io::emitter_config_from_json(json{{"background_gated", 1}}), ConfigError);
  EXPECT_THROW(io::emitter_config_from_json(json::array()), ConfigError);
}

TEST(ConfigJson, ParsedConfigIsValidated) {
  EXPECT_THROW(io::emitter_config_from_json(json{{"beta", 1.5}}), ConfigError);
  EXPECT_THROW(io::conversion_config_from_json(json{{"eta_snspd", 1.5}}), ConfigError);
}

TEST(ConfigJson, FitResultSerialization) {
  analysis::FitResult f;
  f.names = {"A", "tau_ns"};
  f.params = {1.0, 7.47};
  f.sigmas = {0.1, 0.02};
  f.chi2_reduced = 1.1;
  f.converged = true;
  f.n_points = 10;
  f.flags = {"x"};
  const auto j = io::to_json(f);
  EXPECT_DOUBLE_EQ(j["params"]["tau_ns"].get<double>(), 7.47);
  EXPECT_DOUBLE_EQ(j["sigmas"]["A"].get<double>(), 0.1);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_EQ(j["flags"][0], "x");
}
