#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/io/export.hpp"
#include "qfcsim/scenario/scenario.hpp"

namespace qfcsim::scenario {

using nlohmann::json;

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("empty segment in parameter path '" + path + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw ConfigError("empty parameter path");
  return parts;
}

bool is_index(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

void set_parameter(json& scenario, const std::string& path, double value) {
  const auto parts = split_path(path);
  json* node = &scenario;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& p = parts[i];
    if (node->is_array() && is_index(p)) {
      const auto idx = std::stoul(p);
      if (idx >= node->size()) throw ConfigError("parameter path '" + path + "': index out of range");
      node = &(*node)[idx];
    } else if (node->is_object()) {
      // Config sections may be absent and fall back to defaults.
      if (!node->contains(p)) {
        if (i == 0 && (p == "emitter" || p == "conversion")) {
          (*node)[p] = json::object();
        } else {
          throw ConfigError("parameter path '" + path + "' does not exist");
        }
      }
      node = &(*node)[p];
    } else {
      throw ConfigError("parameter path '" + path + "' does not exist");
    }
  }
  const auto& leaf = parts.back();
  if (!node->is_object()) throw ConfigError("parameter path '" + path + "' does not address a field");
  if (node->contains(leaf)) {
    const auto& cur = (*node)[leaf];
    if (!cur.is_number()) throw ConfigError("parameter path '" + path + "' is not a scalar number");
    if (cur.is_number_integer()) {
      if (value < 0 || value != std::floor(value)) {
        throw ConfigError("parameter path '" + path + "' needs a non-negative integer");
      }
      (*node)[leaf] = static_cast<std::uint64_t>(value);
      return;
    }
  }
  (*node)[leaf] = value;
}

std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t index) noexcept {
  return base_seed + static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ULL;
}

SweepReport sweep(const json& base, const std::string& param_path, std::span<const double> values,
                  const RunOptions& options, std::ostream& log) {
  SweepReport report;
  report.values.assign(values.begin(), values.end());
  try {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    if (!base.is_object() || !base.contains("name") || !base["name"].is_string()) {
      throw ConfigError("scenario needs a string \"name\"");
    }
    std::filesystem::path out = options.out_dir;
    if (out.empty()) out = std::filesystem::path("out") / (base["name"].get<std::string>() + "_sweep");
    std::filesystem::create_directories(out);
    if (base.contains("seed") && (!base["seed"].is_number_integer() ||
                                  (!base["seed"].is_number_unsigned() && base["seed"].get<std::int64_t>() < 0))) {
      throw ConfigError("seed must be a non-negative integer");
    }
    const std::uint64_t seed = options.seed.value_or(base.value("seed", std::uint64_t{0}));

    // Every value is validated before any simulation runs.
    std::vector<json> scenarios;
    for (double v : values) {
      json s = base;
      set_parameter(s, param_path, v);
      scenarios.push_back(std::move(s));
    }

    std::ofstream csv(out / "sweep.csv", std::ios::binary);
    if (!csv) throw ConfigError("cannot write sweep.csv");
    csv << "value,step,quantity,estimate,sigma\n";
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      RunOptions o = options;
      o.out_dir = out / std::to_string(i);
      o.seed = sweep_seed(seed, i);
      auto r = run_scenario(scenarios[i], o, log);
      for (const auto& q : r.quantities) {
        csv << io::format_number(values[i]) << ',' << q.step << ',' << q.name << ','
            << io::format_number(q.value) << ',' << (q.sigma ? io::format_number(*q.sigma) : "") << '\n';
      }
      if (r.exit_code != kOk && report.exit_code == kOk) {
        report.exit_code = r.exit_code;
        report.diagnostic = r.diagnostic;
      }
      report.runs.push_back(std::move(r));
    }
  } catch (const ConfigError& e) {
    report.exit_code = kConfigError;
    report.diagnostic = std::string("config error: ") + e.what();
    log << report.diagnostic << '\n';
  } catch (const json::exception& e) {
    report.exit_code = kConfigError;
    report.diagnostic = std::string("config error: ") + e.what();
    log << report.diagnostic << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    report.exit_code = kConfigError;
    report.diagnostic = std::string("output error: ") + e.what();
    log << report.diagnostic << '\n';
  }
  return report;
}

}  // namespace qfcsim::scenario
