#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "qfcsim/analysis/g2.hpp"
#include "qfcsim/analysis/histogram.hpp"
#include "qfcsim/analysis/lifetime.hpp"
#include "qfcsim/analysis/noise.hpp"
#include "qfcsim/core/errors.hpp"
#include "qfcsim/core/timetag.hpp"
#include "qfcsim/io/config_json.hpp"
#include "qfcsim/io/export.hpp"
#include "qfcsim/scenario/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qfcsim;

namespace {

struct AnalyzeArgs {
  std::string file;
  std::string estimator;
  double rep_rate_hz = 1e6;
  std::uint64_t bin_width_ps = 100;
  std::uint64_t window_ps = 100'000;
  std::uint64_t fit_start_ps = 1000;
  std::optional<double> acquisition_s;
  std::int64_t max_sep = 60;
  double eta_snspd = 0.75;
  double filter_fwhm_pm = 36.5;
  std::optional<double> t_fbg;
  double dark_cps = 10.0;
};

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (dir / name).string());
  return f;
}

// Acquisition time defaults to whole periods up to the last tag.
double acquisition_of(const TagStream& tags, const AnalyzeArgs& a) {
  if (a.acquisition_s) return *a.acquisition_s;
  if (tags.empty()) return 0.0;
  const double period = 1.0 / a.rep_rate_hz;
  return std::ceil(static_cast<double>(tags.back().time_ps) * 1e-12 / period) * period;
}

int analyze(const AnalyzeArgs& a, const std::optional<fs::path>& out) {
  const auto tags = read_timetags_file(a.file);
  json result{{"file", a.file}, {"estimator", a.estimator}, {"tags", tags.size()}};

  if (a.estimator == "histogram" || a.estimator == "lifetime") {
    const double acq = acquisition_of(tags, a);
    const auto hist = analysis::histogram_vs_pulse(tags, a.rep_rate_hz, a.bin_width_ps, a.window_ps,
                                                   acq > 0 ? std::optional<double>(acq) : std::nullopt);
    if (out) {
      auto f = open_out(*out, "histogram.csv");
      io::write_histogram_csv(f, hist);
    }
    result["acquisition_s"] = acq;
    if (a.estimator == "lifetime") {
      analysis::ExponentialFitOptions opts;
      opts.fit_start_ps = a.fit_start_ps;
      const auto fit = analysis::fit_exponential(hist, opts);
      result["fit"] = io::to_json(fit);
      result["snr"] = analysis::snr_after_pulse(fit);
    } else {
      result["total"] = hist.total();
    }
  } else if (a.estimator == "g2") {
    TagStream ch0, ch1;
    for (const auto& t : tags) {
      if (t.channel == Channel::kSignal) ch0.push_back(t);
      if (t.channel == Channel::kSecond) ch1.push_back(t);
    }
    const auto hist = analysis::g2_pulsed(ch0, ch1, a.rep_rate_hz, a.max_sep);
    if (out) {
      auto f = open_out(*out, "g2.csv");
      io::write_g2_csv(f, hist);
    }
    const auto fit = analysis::fit_bunching(hist);
    result["g2_zero"] = hist.g2_zero();
    result["g2_zero_sigma"] = hist.g2_zero_sigma();
    result["fit"] = io::to_json(fit.fit);
  } else if (a.estimator == "noise") {
    std::uint64_t n = 0;
    for (const auto& t : tags) n += t.channel != Channel::kSync;
    const double acq = acquisition_of(tags, a);
    if (acq <= 0) throw ConfigError("noise estimate needs --acquisition or a non-empty stream");
    const auto est = analysis::noise_density(analysis::NoiseMeasurement{n, acq}, a.eta_snspd,
                                             a.filter_fwhm_pm, a.t_fbg, a.dark_cps);
    result["count_rate_cps"] = est.count_rate_cps;
    result["density_cts_s_pm"] = est.density_cts_s_pm;
    result["ci68"] = {est.ci68.low, est.ci68.high};
  } else {
    throw ConfigError("unknown estimator '" + a.estimator + "'");
  }
  std::cout << result.dump(2) << '\n';
  if (out) open_out(*out, "analysis.json") << result.dump(2) << '\n';
  return scenario::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator and analysis toolkit for frequency-converted single photons"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  app.add_option("--seed", seed, "Override the scenario seed");
  app.add_option("--out", out, "Output directory");

  std::string scenario_path;
  bool strict = false;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario file");
  simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_flag("--strict", strict, "Exit 1 when a target is missed");

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario once per parameter value");
  sweep->add_option("scenario", scenario_path, "Scenario JSON")->required();
  sweep->add_option("--param", param, "Dot path of a scalar field, e.g. conversion.pump_power_W")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

  AnalyzeArgs a;
  auto* an = app.add_subcommand("analyze", "Run one estimator on a QTT1 time-tag file");
  an->add_option("tags", a.file, "Time-tag file")->required();
  an->add_option("--estimator", a.estimator, "lifetime | g2 | noise | histogram")
      ->required()
      ->check(CLI::IsMember({"lifetime", "g2", "noise", "histogram"}));
  an->add_option("--rep-rate", a.rep_rate_hz, "Excitation repetition rate (Hz)");
  an->add_option("--bin-width", a.bin_width_ps, "Histogram bin width (ps)");
  an->add_option("--window", a.window_ps, "Histogram window (ps)");
  an->add_option("--fit-start", a.fit_start_ps, "First delay used by the lifetime fit (ps)");
  an->add_option("--acquisition", a.acquisition_s, "Acquisition time (s)");
  an->add_option("--max-sep", a.max_sep, "Largest pulse separation for g2");
  an->add_option("--eta", a.eta_snspd, "Detector efficiency");
  an->add_option("--filter-pm", a.filter_fwhm_pm, "Filter FWHM (pm)");
  an->add_option("--t-fbg", a.t_fbg, "Grating transmission");
  an->add_option("--dark", a.dark_cps, "Dark count rate (cts/s)");

  CLI11_PARSE(app, argc, argv);

  scenario::RunOptions opts;
  opts.seed = seed;
  opts.strict = strict;
  if (out) opts.out_dir = *out;

  if (*simulate) {
    const auto r = scenario::run_scenario_file(scenario_path, opts, std::cerr);
    if (r.exit_code == scenario::kOk || r.exit_code == scenario::kTargetsFailed) {
      scenario::print_summary(std::cout, r);
    }
    return r.exit_code;
  }
  if (*sweep) {
    nlohmann::json base;
    try {
      base = scenario::load_scenario(scenario_path);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return scenario::kConfigError;
    }
    const auto r = scenario::sweep(base, param, values, opts, std::cerr);
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
      std::cout << param << " = " << io::format_number(r.values[i]) << '\n';
      scenario::print_summary(std::cout, r.runs[i]);
    }
    return r.exit_code;
  }
  try {
    return analyze(a, out ? std::optional<fs::path>(*out) : std::nullopt);
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return scenario::kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return scenario::kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return scenario::kConfigError;
  } catch (const EstimatorError& e) {
    std::cerr << "estimator failure: " << e.what() << '\n';
    return scenario::kEstimatorError;
  } catch (const std::runtime_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return scenario::kConfigError;
  }
}
