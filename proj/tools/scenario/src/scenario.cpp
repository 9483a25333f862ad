#include <fstream>
#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/core/timetag.hpp"
#include "qfcsim/io/export.hpp"
#include "steps.hpp"

namespace qfcsim::scenario {

using nlohmann::json;
using io::format_number;

namespace {

const std::set<std::string> kScenarioKeys = {"name", "description", "seed", "emitter",
                                             "conversion", "analysis", "outputs"};

std::uint64_t read_seed(const json& s) {
  if (!s.contains("seed")) return 0;
  const auto& v = s["seed"];
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError("seed must be a non-negative integer");
  }
  return s["seed"].get<std::uint64_t>();
}

void validate_shape(const json& s) {
  if (!s.is_object()) throw ConfigError("scenario must be a JSON object");
  for (const auto& [key, _] : s.items()) {
    if (!kScenarioKeys.contains(key)) throw ConfigError("scenario: unknown field '" + key + "'");
  }
  if (!s.contains("name") || !s["name"].is_string()) throw ConfigError("scenario needs a string \"name\"");
  if (!s.contains("analysis") || !s["analysis"].is_array()) {
    throw ConfigError("scenario needs an \"analysis\" array");
  }
  if (s.contains("outputs") && !s["outputs"].is_object()) throw ConfigError("outputs must be an object");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < s["analysis"].size(); ++i) {
    const auto& step = s["analysis"][i];
    if (!step.is_object()) throw ConfigError("analysis steps must be objects");
    const auto id = step.value("id", step.value("kind", std::string("step")) + std::to_string(i));
    if (!ids.insert(id).second) throw ConfigError("duplicate step id '" + id + "'");
  }
}

std::string step_id(const json& step, std::size_t i) {
  if (step.contains("id")) {
    if (!step["id"].is_string()) throw ConfigError("step id must be a string");
    return step["id"].get<std::string>();
  }
  return step.value("kind", std::string("step")) + std::to_string(i);
}

// Target forms: {"value", "abs_tol"}, {"value", "rel_tol"}, {"value",
// "tol_sigma"} (uses the estimate's sigma), {"min"} and/or {"max"}.
TargetCheck check_target(const std::string& step, const std::string& name, const json& spec,
                         const Quantity* q) {
  if (!spec.is_object()) throw ConfigError("target '" + name + "' must be an object");
  for (const auto& [key, v] : spec.items()) {
    static const std::set<std::string> keys = {"value", "abs_tol", "rel_tol", "tol_sigma", "min", "max"};
    if (!keys.contains(key)) throw ConfigError("target '" + name + "': unknown field '" + key + "'");
    if (!v.is_number()) throw ConfigError("target '" + name + "': '" + key + "' must be a number");
  }
  TargetCheck c{step, name, std::nullopt, "", true};
  std::ostringstream exp;
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  if (spec.contains("value")) {
    const double v = spec["value"].get<double>();
    double tol = 0;
    if (spec.contains("abs_tol")) {
      tol = spec["abs_tol"].get<double>();
      exp << format_number(v) << " +/- " << format_number(tol);
    } else if (spec.contains("rel_tol")) {
      tol = std::abs(v) * spec["rel_tol"].get<double>();
      exp << format_number(v) << " +/- " << format_number(tol);
    } else if (spec.contains("tol_sigma")) {
      const double k = spec["tol_sigma"].get<double>();
      tol = q && q->sigma ? k * *q->sigma : 0.0;
      exp << format_number(v) << " within " << format_number(k) << " sigma";
    } else {
      throw ConfigError("target '" + name + "' needs abs_tol, rel_tol or tol_sigma");
    }
    lo = v - tol;
    hi = v + tol;
  } else if (!spec.contains("min") && !spec.contains("max")) {
    throw ConfigError("target '" + name + "' needs value or min/max");
  }
  if (spec.contains("min")) {
    lo = std::max(lo, spec["min"].get<double>());
    exp << (exp.tellp() > 0 ? ", " : "") << ">= " << format_number(spec["min"].get<double>());
  }
  if (spec.contains("max")) {
    hi = std::min(hi, spec["max"].get<double>());
    exp << (exp.tellp() > 0 ? ", " : "") << "<= " << format_number(spec["max"].get<double>());
  }
  c.expected = exp.str();
  if (q) {
    c.estimate = q->value;
    c.pass = q->value >= lo && q->value <= hi;
  }
  return c;
}

std::filesystem::path resolve_out_dir(const json& s, const RunOptions& options) {
  if (!options.out_dir.empty()) return options.out_dir;
  if (s.contains("outputs") && s["outputs"].contains("directory")) {
    if (!s["outputs"]["directory"].is_string()) throw ConfigError("outputs.directory must be a string");
    return s["outputs"]["directory"].get<std::string>();
  }
  return std::filesystem::path("out") / s["name"].get<std::string>();
}

void write_summary_csv(const std::filesystem::path& path, const RunReport& r) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << "step,quantity,estimate,sigma\n";
  for (const auto& q : r.quantities) {
    f << q.step << ',' << q.name << ',' << format_number(q.value) << ','
      << (q.sigma ? format_number(*q.sigma) : "") << '\n';
  }
  std::ofstream t(path.parent_path() / "targets.csv", std::ios::binary);
  t << "step,quantity,estimate,expected,pass\n";
  for (const auto& c : r.checks) {
    t << c.step << ',' << c.quantity << ',' << (c.estimate ? format_number(*c.estimate) : "") << ",\""
      << c.expected << "\"," << (c.estimate ? (c.pass ? "pass" : "FAIL") : "no data") << '\n';
  }
}

}  // namespace

bool RunReport::all_targets_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const Quantity* RunReport::find(std::string_view step, std::string_view name) const {
  for (const auto& q : quantities) {
    if (q.step == step && q.name == name) return &q;
  }
  return nullptr;
}

json load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunReport run_scenario(const json& scenario, const RunOptions& options, std::ostream& log) {
  RunReport report;
  try {
    validate_shape(scenario);
    report.name = scenario["name"].get<std::string>();
    report.seed = options.seed.value_or(read_seed(scenario));
    report.out_dir = resolve_out_dir(scenario, options);
    std::filesystem::create_directories(report.out_dir);

    detail::StepContext ctx{scenario, report.seed, report.out_dir, {}, {}, {}, {}};
    std::vector<std::pair<std::string, const json*>> steps;
    for (std::size_t i = 0; i < scenario["analysis"].size(); ++i) {
      const auto& step = scenario["analysis"][i];
      const auto id = step_id(step, i);
      detail::run_step(ctx, step, id);
      steps.emplace_back(id, &step);
    }
    report.quantities = std::move(ctx.quantities);

    for (const auto& [id, step] : steps) {
      if (!step->contains("targets")) continue;
      const auto& targets = (*step)["targets"];
      if (!targets.is_object()) throw ConfigError("step '" + id + "': targets must be an object");
      const bool empty = std::find(ctx.empty_steps.begin(), ctx.empty_steps.end(), id) != ctx.empty_steps.end();
      for (const auto& [name, spec] : targets.items()) {
        const Quantity* q = report.find(id, name);
        if (!q && !empty) throw ConfigError("step '" + id + "' reports no quantity '" + name + "'");
        auto check = check_target(id, name, spec, q);
        if (empty) check.pass = true;  // nothing simulated, nothing to compare
        report.checks.push_back(std::move(check));
      }
    }

    if (scenario.contains("outputs") && scenario["outputs"].contains("stream")) {
      const auto& outputs = scenario["outputs"];
      if (!outputs["stream"].is_string()) throw ConfigError("outputs.stream must be a file name");
      std::string source;
      if (outputs.contains("stream_step")) {
        if (!outputs["stream_step"].is_string()) throw ConfigError("outputs.stream_step must be a step id");
        source = outputs["stream_step"].get<std::string>();
      } else {
        for (const auto& [id, step] : steps) {
          if (ctx.step_streams.contains(id)) {
            source = id;
            break;
          }
        }
      }
      const auto it = ctx.step_streams.find(source);
      if (it == ctx.step_streams.end()) {
        throw ConfigError("outputs.stream: no time-tag stream from step '" + source + "'");
      }
      write_timetags_file(report.out_dir / outputs["stream"].get<std::string>(), it->second);
    }
    write_summary_csv(report.out_dir / "summary.csv", report);
    if (options.strict && !report.all_targets_pass()) report.exit_code = kTargetsFailed;
  } catch (const ConfigError& e) {
    report.exit_code = kConfigError;
    report.diagnostic = std::string("config error: ") + e.what();
  } catch (const DomainError& e) {
    report.exit_code = kConfigError;
    report.diagnostic = std::string("config error: ") + e.what();
  } catch (const json::exception& e) {
    report.exit_code = kConfigError;
    report.diagnostic = std::string("config error: ") + e.what();
  } catch (const EstimatorError& e) {
    report.exit_code = kEstimatorError;
    report.diagnostic = std::string("estimator failure: ") + e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    report.exit_code = kConfigError;
    report.diagnostic = std::string("output error: ") + e.what();
  }
  if (!report.diagnostic.empty()) log << report.diagnostic << '\n';
  return report;
}

RunReport run_scenario_file(const std::filesystem::path& path, const RunOptions& options, std::ostream& log) {
  json s;
  try {
    s = load_scenario(path);
  } catch (const ConfigError& e) {
    RunReport r;
    r.exit_code = kConfigError;
    r.diagnostic = std::string("config error: ") + e.what();
    log << r.diagnostic << '\n';
    return r;
  }
  return run_scenario(s, options, log);
}

void print_summary(std::ostream& out, const RunReport& r) {
  auto col = [&out](const std::string& text, int width) {
    out << std::left << std::setw(width) << text << ' ';
  };
  out << "scenario " << r.name << " (seed " << r.seed << ") -> " << r.out_dir.string() << '\n';
  col("step", 14);
  col("quantity", 24);
  col("estimate", 16);
  col("sigma", 16);
  col("target", 28);
  out << "result\n";
  for (const auto& q : r.quantities) {
    const TargetCheck* check = nullptr;
    for (const auto& c : r.checks) {
      if (c.step == q.step && c.quantity == q.name) check = &c;
    }
    col(q.step, 14);
    col(q.name, 24);
    col(format_number(q.value), 16);
    col(q.sigma ? format_number(*q.sigma) : "", 16);
    col(check ? check->expected : "", 28);
    out << (check ? (check->pass ? "pass" : "FAIL") : "") << '\n';
  }
  for (const auto& c : r.checks) {
    if (!c.estimate) {
      col(c.step, 14);
      col(c.quantity, 24);
      out << "no data\n";
    }
  }
}

}  // namespace qfcsim::scenario
