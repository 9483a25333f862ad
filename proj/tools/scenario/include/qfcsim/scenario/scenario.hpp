#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qfcsim::scenario {

enum ExitCode : int {
  kOk = 0,
  kTargetsFailed = 1,  // only reported with RunOptions::strict
  kConfigError = 2,
  kEstimatorError = 3,
};

struct RunOptions {
  // Empty: use the scenario's outputs.directory, else "out/<name>".
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

struct Quantity {
  std::string step;
  std::string name;
  double value = 0.0;
  std::optional<double> sigma;
};

struct TargetCheck {
  std::string step;
  std::string quantity;
  std::optional<double> estimate;  // empty when the step had no data
  std::string expected;
  bool pass = false;
};

struct RunReport {
  int exit_code = kOk;
  std::string diagnostic;
  std::string name;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::vector<Quantity> quantities;
  std::vector<TargetCheck> checks;

  bool all_targets_pass() const;
  const Quantity* find(std::string_view step, std::string_view name) const;
};

// Reads and parses a scenario file; throws ConfigError.
nlohmann::json load_scenario(const std::filesystem::path& path);

// Runs every analysis step, writes its artifacts and a summary. Errors are
// reported through exit_code and diagnostic rather than thrown.
RunReport run_scenario(const nlohmann::json& scenario, const RunOptions& options, std::ostream& log);
RunReport run_scenario_file(const std::filesystem::path& path, const RunOptions& options,
                            std::ostream& log);

void print_summary(std::ostream& out, const RunReport& report);

// Sets a scalar field addressed by a dot path such as
// "conversion.pump_power_W" or "analysis.1.duration_s". Throws ConfigError
// when the path is missing or addresses an object, array or string.
void set_parameter(nlohmann::json& scenario, const std::string& path, double value);

// Seed of sweep point i; point 0 keeps the base seed.
std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t index) noexcept;

struct SweepReport {
  int exit_code = kOk;
  std::string diagnostic;
  std::vector<double> values;
  std::vector<RunReport> runs;
};

// One scenario run per value in out_dir/<index>/, plus out_dir/sweep.csv
// with every quantity of every run keyed by the swept value.
SweepReport sweep(const nlohmann::json& base, const std::string& param_path,
                  std::span<const double> values, const RunOptions& options, std::ostream& log);

// Minimal static plot.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool line = false;  // polyline instead of markers
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

std::string render_svg(const Plot& plot);
void write_svg(const std::filesystem::path& path, const Plot& plot);

}  // namespace qfcsim::scenario
