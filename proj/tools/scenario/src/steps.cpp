#include "steps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "qfcsim/analysis/efficiency.hpp"
#include "qfcsim/analysis/g2.hpp"
#include "qfcsim/analysis/histogram.hpp"
#include "qfcsim/analysis/lifetime.hpp"
#include "qfcsim/analysis/noise.hpp"
#include "qfcsim/core/errors.hpp"
#include "qfcsim/core/random.hpp"
#include "qfcsim/io/config_json.hpp"
#include "qfcsim/io/export.hpp"

namespace qfcsim::scenario::detail {

using nlohmann::json;
using io::format_number;

namespace {

const std::set<std::string> kCommonKeys = {"id", "kind", "targets", "emitter", "conversion", "description"};

void check_keys(const json& step, const std::string& id, std::initializer_list<const char*> extra) {
  std::set<std::string> allowed = kCommonKeys;
  for (const char* k : extra) allowed.insert(k);
  for (const auto& [key, _] : step.items()) {
    if (!allowed.contains(key)) throw ConfigError("step '" + id + "': unknown field '" + key + "'");
  }
}

double number(const json& step, const char* key, double fallback) {
  if (!step.contains(key)) return fallback;
  if (!step[key].is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return step[key].get<double>();
}

std::uint64_t count(const json& step, const char* key, std::uint64_t fallback) {
  if (!step.contains(key)) return fallback;
  const auto& v = step[key];
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& step, const char* key) {
  if (!step.contains(key) || !step[key].is_array() || step[key].empty()) {
    throw ConfigError(std::string("field '") + key + "' must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : step[key]) {
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

qfc::ConversionConfig require_conversion(const std::optional<qfc::ConversionConfig>& c, const std::string& id) {
  if (!c) throw ConfigError("step '" + id + "' needs a conversion config");
  return *c;
}

// Ordinary least squares y = a + b x with standard errors and R^2.
struct LineFit {
  double intercept = 0, slope = 0, slope_sigma = 0, r_squared = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) throw EstimatorError("line fit needs at least two distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) ssr += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  f.r_squared = syy > 0 ? 1.0 - ssr / syy : 1.0;
  f.slope_sigma = x.size() > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return f;
}

// Noise-only acquisition through the converter, estimated back to a density.
analysis::NoiseDensityEstimate measure_noise(const qfc::ConversionConfig& c, double duration_s,
                                             std::uint64_t seed) {
  const auto duration_ps = static_cast<std::uint64_t>(std::llround(duration_s * 1e12));
  const auto tags = qfc::convert_stream({}, c, duration_ps, seed);
  return analysis::noise_density(analysis::NoiseMeasurement{tags.size(), duration_s}, c.eta_snspd,
                                 c.filter_fwhm_pm, c.t_fbg, c.dark_count_cps + c.fiber_noise_cps);
}

double true_density(const qfc::ConversionConfig& c) {
  return qfc::detected_spdc_rate(c) / (c.eta_snspd * c.filter_fwhm_pm * c.t_fbg);
}

void lifetime_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {"source", "bin_width_ps", "window_ps", "fit_start_ps", "fit_end_ps"});
  const auto em = ctx.emitter_for(step);
  const auto bin = count(step, "bin_width_ps", 100);
  const auto window = count(step, "window_ps", 100'000);
  const auto& tags = ctx.stream_for(step);
  ctx.step_streams[id] = tags;
  const double acquisition = static_cast<double>(em.n_pulses) / em.rep_rate_hz;

  auto csv = open_out(ctx.out_dir / (id + "_histogram.csv"));
  if (tags.empty()) {
    csv << "bin_center_ps,counts,counts_per_s\n";
    ctx.empty_steps.push_back(id);
    return;
  }
  const auto hist = analysis::histogram_vs_pulse(tags, em.rep_rate_hz, bin, window, acquisition);
  io::write_histogram_csv(csv, hist);

  analysis::ExponentialFitOptions opts;
  opts.fit_start_ps = count(step, "fit_start_ps", 1000);
  if (step.contains("fit_end_ps")) opts.fit_end_ps = count(step, "fit_end_ps", 0);
  const auto fit = analysis::fit_exponential(hist, opts);
  open_out(ctx.out_dir / (id + "_fit.json")) << io::to_json(fit).dump(2) << '\n';

  const double a = fit.param("A"), b = fit.param("B");
  const double sa = fit.sigma("A"), sb = fit.sigma("B");
  ctx.emit(id, "tau_ns", fit.param("tau_ns"), fit.sigma("tau_ns"));
  ctx.emit(id, "A", a, sa);
  ctx.emit(id, "B", b, sb);
  const double snr = analysis::snr_after_pulse(fit);
  const double snr_sigma = std::isfinite(snr) ? snr * std::hypot(sa / a, sb / b) : 0.0;
  ctx.emit(id, "snr", snr, snr_sigma);
  // Alternative reading: first fitted bin over the fitted floor.
  std::size_t first = 0;
  while (first < hist.size() && hist.bin_center_ps(first) < static_cast<double>(opts.fit_start_ps)) ++first;
  if (first < hist.size() && b > 0) ctx.emit(id, "snr_first_bin", hist.value(first) / b);
  ctx.emit(id, "detections", static_cast<double>(tags.size()));

  Plot plot{"Lifetime " + id, "delay (ps)", "counts/s", true, {}};
  PlotSeries data{"histogram", {}, {}, false}, model{"fit", {}, {}, true};
  const double tau_ps = fit.param("tau_ns") * 1e3;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    data.x.push_back(hist.bin_center_ps(i));
    data.y.push_back(hist.value(i));
    if (hist.bin_center_ps(i) >= static_cast<double>(opts.fit_start_ps)) {
      model.x.push_back(hist.bin_center_ps(i));
      model.y.push_back(a * std::exp(-hist.bin_center_ps(i) / tau_ps) + b);
    }
  }
  plot.series = {data, model};
  write_svg(ctx.out_dir / (id + ".svg"), plot);
}

void g2_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {"source", "max_sep", "baseline_min", "baseline_max"});
  const auto em = ctx.emitter_for(step);
  const auto max_sep = static_cast<std::int64_t>(count(step, "max_sep", 60));
  analysis::G2Options opts;
  opts.baseline_min = static_cast<std::int64_t>(count(step, "baseline_min", 25));
  opts.baseline_max = static_cast<std::int64_t>(count(step, "baseline_max", 50));
  const auto& tags = ctx.stream_for(step);

  auto csv = open_out(ctx.out_dir / (id + "_g2.csv"));
  const auto [a, b] = emitter::split_50_50(tags, {derive_seed(ctx.seed, "split:" + id), 0});
  auto& both = ctx.step_streams[id];
  both.reserve(a.size() + b.size());
  both.insert(both.end(), a.begin(), a.end());
  both.insert(both.end(), b.begin(), b.end());
  sort_tags(both);
  if (a.empty() || b.empty()) {
    csv << "separation,counts,g2,sigma\n";
    ctx.empty_steps.push_back(id);
    return;
  }
  const auto hist = analysis::g2_pulsed(a, b, em.rep_rate_hz, max_sep, opts);
  io::write_g2_csv(csv, hist);
  const auto fit = analysis::fit_bunching(hist);
  open_out(ctx.out_dir / (id + "_fit.json")) << io::to_json(fit.fit).dump(2) << '\n';

  ctx.emit(id, "A", fit.fit.param("A"), fit.fit.sigma("A"));
  ctx.emit(id, "tau_pulses", fit.fit.param("tau_pulses"), fit.fit.sigma("tau_pulses"));
  ctx.emit(id, "g2_zero", hist.g2_zero(), hist.g2_zero_sigma());

  Plot plot{"g2 " + id, "pulse separation", "g2", false, {}};
  PlotSeries data{"g2", {}, {}, false}, model{"1 + A exp(-|n|/tau)", {}, {}, true};
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double n = static_cast<double>(hist.separation(i));
    data.x.push_back(n);
    data.y.push_back(hist.g2[i]);
    if (n != 0) {
      model.x.push_back(n);
      model.y.push_back(1 + fit.fit.param("A") * std::exp(-std::abs(n) / fit.fit.param("tau_pulses")));
    } else {
      model.x.push_back(std::nan(""));
      model.y.push_back(std::nan(""));
    }
  }
  plot.series = {data, model};
  write_svg(ctx.out_dir / (id + ".svg"), plot);
}

void noise_density_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {"duration_s", "trials"});
  const auto c = require_conversion(ctx.conversion_for(step), id);
  const double duration = number(step, "duration_s", 20.0);
  const auto trials = count(step, "trials", 1);
  if (trials == 0) throw ConfigError("step '" + id + "': trials must be positive");
  const double truth = true_density(c);
  const auto base = derive_seed(ctx.seed, "noise:" + id);

  auto csv = open_out(ctx.out_dir / (id + ".csv"));
  csv << "trial,count_rate_cps,density,ci_low,ci_high,covers_truth\n";
  std::vector<double> est;
  std::uint64_t covered = 0;
  analysis::CredibleInterval first_ci;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto e = measure_noise(c, duration, splitmix64(base + t));
    const bool cov = e.ci68.contains(truth);
    covered += cov;
    if (t == 0) first_ci = e.ci68;
    est.push_back(e.density_cts_s_pm);
    csv << t << ',' << format_number(e.count_rate_cps) << ',' << format_number(e.density_cts_s_pm) << ','
        << format_number(e.ci68.low) << ',' << format_number(e.ci68.high) << ',' << (cov ? 1 : 0) << '\n';
  }
  const double n = static_cast<double>(trials);
  const double mean = std::accumulate(est.begin(), est.end(), 0.0) / n;
  double var = 0;
  for (double v : est) var += (v - mean) * (v - mean);
  const double sigma = trials > 1 ? std::sqrt(var / (n - 1)) : 0.5 * (first_ci.high - first_ci.low);
  ctx.emit(id, "density", mean, sigma);
  ctx.emit(id, "ci_low", first_ci.low);
  ctx.emit(id, "ci_high", first_ci.high);
  ctx.emit(id, "true_density", truth);
  const double frac = static_cast<double>(covered) / n;
  ctx.emit(id, "coverage", frac, std::sqrt(frac * (1 - frac) / n));
}

void noise_power_sweep_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {"duration_s", "pump_powers_W"});
  auto c = require_conversion(ctx.conversion_for(step), id);
  const double duration = number(step, "duration_s", 300.0);
  const auto powers = number_list(step, "pump_powers_W");
  const auto base = derive_seed(ctx.seed, "noise_power:" + id);

  auto csv = open_out(ctx.out_dir / (id + ".csv"));
  csv << "pump_power_W,density,ci_low,ci_high\n";
  std::vector<double> dens;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    c.pump_power_W = powers[i];
    qfc::validate(c);
    const auto e = measure_noise(c, duration, splitmix64(base + i));
    dens.push_back(e.density_cts_s_pm);
    csv << format_number(powers[i]) << ',' << format_number(e.density_cts_s_pm) << ','
        << format_number(e.ci68.low) << ',' << format_number(e.ci68.high) << '\n';
  }
  const auto line = fit_line(powers, dens);
  ctx.emit(id, "slope_per_W", line.slope, line.slope_sigma);
  ctx.emit(id, "intercept", line.intercept);
  ctx.emit(id, "r_squared", line.r_squared);
  ctx.emit(id, "density_at_max_power", dens.back());

  Plot plot{"Noise density vs pump power", "pump power (W)", "noise density (cts/s/pm)", false, {}};
  PlotSeries model{"linear fit", {}, {}, true};
  const auto [lo, hi] = std::minmax_element(powers.begin(), powers.end());
  model.x = {*lo, *hi};
  model.y = {line.intercept + line.slope * *lo, line.intercept + line.slope * *hi};
  plot.series = {{"estimate", powers, dens, false}, model};
  write_svg(ctx.out_dir / (id + ".svg"), plot);
}

void noise_flatness_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {"duration_s", "detunings_GHz"});
  auto c = require_conversion(ctx.conversion_for(step), id);
  const double duration = number(step, "duration_s", 300.0);
  const auto det = number_list(step, "detunings_GHz");
  const auto base = derive_seed(ctx.seed, "noise_flatness:" + id);

  auto csv = open_out(ctx.out_dir / (id + ".csv"));
  csv << "detuning_GHz,density,ci_low,ci_high\n";
  std::vector<double> dens;
  for (std::size_t i = 0; i < det.size(); ++i) {
    c.filter_center_detuning_hz = det[i] * 1e9;
    const auto e = measure_noise(c, duration, splitmix64(base + i));
    dens.push_back(e.density_cts_s_pm);
    csv << format_number(det[i]) << ',' << format_number(e.density_cts_s_pm) << ','
        << format_number(e.ci68.low) << ',' << format_number(e.ci68.high) << '\n';
  }
  const double mean = std::accumulate(dens.begin(), dens.end(), 0.0) / static_cast<double>(dens.size());
  double dev = 0;
  for (double d : dens) dev = std::max(dev, std::abs(d - mean));
  ctx.emit(id, "mean_density", mean);
  ctx.emit(id, "max_relative_deviation", mean > 0 ? dev / mean : 0.0);
  if (det.size() >= 2) {
    const auto line = fit_line(det, dens);
    ctx.emit(id, "relative_slope_per_GHz", mean > 0 ? line.slope / mean : 0.0,
             mean > 0 ? line.slope_sigma / mean : 0.0);
  }
  Plot plot{"Noise density vs filter detuning", "detuning (GHz)", "noise density (cts/s/pm)", false, {}};
  plot.series = {{"estimate", det, dens, false}};
  write_svg(ctx.out_dir / (id + ".svg"), plot);
}

void efficiency_curve_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {"pump_powers_W", "photons_per_point"});
  const auto c = require_conversion(ctx.conversion_for(step), id);
  const auto powers = number_list(step, "pump_powers_W");
  const auto photons = count(step, "photons_per_point", 100'000);
  if (photons == 0) throw ConfigError("step '" + id + "': photons_per_point must be positive");
  const auto base = derive_seed(ctx.seed, "efficiency:" + id);

  // Each point counts photons behind the output coating, then undoes the
  // coating loss the way a power-meter measurement would be corrected.
  auto csv = open_out(ctx.out_dir / (id + ".csv"));
  csv << "pump_power_W,internal_efficiency,sigma,model\n";
  std::vector<analysis::EfficiencyPoint> pts;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const double eta = qfc::efficiency_at_power(c, powers[i]) *
                       qfc::spectral_acceptance(c, c.input_detuning_hz);
    const double p = eta * c.coating_transmission;
    RandomStream rng({base, i});
    std::uint64_t k = 0;
    for (std::uint64_t j = 0; j < photons; ++j) k += rng.bernoulli(p);
    const double measured = static_cast<double>(k) / static_cast<double>(photons);
    const double internal = analysis::internal_efficiency(measured, 1 - c.coating_transmission).value;
    const double sigma = std::max(std::sqrt(p * (1 - p) / static_cast<double>(photons)), 1.0 / static_cast<double>(photons)) /
                         c.coating_transmission;
    pts.push_back({powers[i], internal, sigma});
    csv << format_number(powers[i]) << ',' << format_number(internal) << ',' << format_number(sigma) << ','
        << format_number(eta) << '\n';
  }
  const auto fit = analysis::fit_efficiency_curve(pts);
  open_out(ctx.out_dir / (id + "_fit.json"))
      << json{{"sine", io::to_json(fit.sine)}, {"linear", io::to_json(fit.linear)},
              {"linear_preferred", fit.linear_preferred}}
             .dump(2)
      << '\n';
  const auto top = std::max_element(pts.begin(), pts.end(),
                                    [](auto& x, auto& y) { return x.pump_power_W < y.pump_power_W; });
  ctx.emit(id, "internal_at_max_power", top->efficiency, top->sigma);
  ctx.emit(id, "external_at_max_power",
           top->efficiency * c.coating_transmission * c.output_coupling,
           *top->sigma * c.coating_transmission * c.output_coupling);
  ctx.emit(id, "eta_max", fit.sine.param("eta_max"), fit.sine.sigma("eta_max"));
  ctx.emit(id, "alpha_L2_per_W", fit.sine.param("alpha_L2_per_W"), fit.sine.sigma("alpha_L2_per_W"));
  ctx.emit(id, "linear_preferred", fit.linear_preferred ? 1.0 : 0.0);

  Plot plot{"Conversion efficiency", "pump power (W)", "internal efficiency", false, {}};
  PlotSeries data{"measured", {}, {}, false}, model{"sin^2 fit", {}, {}, true};
  auto fc = c;
  fc.eta_max = fit.sine.param("eta_max");
  fc.alpha_L2_per_W = fit.sine.param("alpha_L2_per_W");
  for (const auto& p : pts) {
    data.x.push_back(p.pump_power_W);
    data.y.push_back(p.efficiency);
  }
  for (int i = 0; i <= 100; ++i) {
    const double pw = top->pump_power_W * i / 100.0;
    model.x.push_back(pw);
    model.y.push_back(qfc::efficiency_at_power(fc, pw));
  }
  plot.series = {data, model};
  write_svg(ctx.out_dir / (id + ".svg"), plot);
}

void acceptance_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {"detunings_GHz", "start_GHz", "stop_GHz", "step_GHz", "threshold"});
  const auto c = require_conversion(ctx.conversion_for(step), id);
  std::vector<double> det;
  if (step.contains("detunings_GHz")) {
    det = number_list(step, "detunings_GHz");
  } else {
    const double start = number(step, "start_GHz", -100), stop = number(step, "stop_GHz", 100);
    const double inc = number(step, "step_GHz", 5);
    if (inc <= 0 || stop < start) throw ConfigError("step '" + id + "': bad detuning range");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / inc + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) det.push_back(start + inc * static_cast<double>(i));
  }
  const double threshold = number(step, "threshold", 0.8);

  auto csv = open_out(ctx.out_dir / (id + ".csv"));
  csv << "detuning_GHz,internal_efficiency\n";
  std::vector<analysis::AcceptancePoint> pts;
  std::vector<double> eff;
  for (double d : det) {
    auto cd = c;
    cd.input_detuning_hz = d * 1e9;
    const double e = qfc::internal_efficiency(cd);
    pts.push_back({d * 1e9, e});
    eff.push_back(e);
    csv << format_number(d) << ',' << format_number(e) << '\n';
  }
  ctx.emit(id, "bandwidth_GHz", analysis::acceptance_bandwidth(pts, threshold) / 1e9);
  ctx.emit(id, "peak_efficiency", *std::max_element(eff.begin(), eff.end()));
  Plot plot{"Spectral acceptance", "input detuning (GHz)", "internal efficiency", false, {}};
  plot.series = {{"model", det, eff, false}};
  write_svg(ctx.out_dir / (id + ".svg"), plot);
}

void loss_budget_step(StepContext& ctx, const json& step, const std::string& id) {
  check_keys(step, id, {});
  const auto c = require_conversion(ctx.conversion_for(step), id);
  const auto budget = qfc::loss_budget(c);
  auto csv = open_out(ctx.out_dir / (id + ".csv"));
  csv << "factor,value\n";
  for (const auto& f : budget.factors) csv << f.name << ',' << format_number(f.value) << '\n';
  csv << "product," << format_number(budget.product) << '\n';
  ctx.emit(id, "product", budget.product);
  ctx.emit(id, "internal_efficiency", qfc::internal_efficiency(c));
  ctx.emit(id, "external_efficiency", qfc::external_efficiency(c));
  ctx.emit(id, "signal_survival", qfc::signal_survival(c));
  ctx.emit(id, "detected_noise_rate_cps", qfc::detected_noise_rate(c));
  ctx.emit(id, "wavelength_out_nm", qfc::wavelength_out(c.lambda_in_m, c.lambda_pump_m) * 1e9);
}

}  // namespace

emitter::EmitterConfig StepContext::emitter_for(const json& step) const {
  json e = scenario.value("emitter", json::object());
  if (step.contains("emitter")) e.merge_patch(step["emitter"]);
  if (!scenario.contains("emitter") && !step.contains("emitter")) {
    throw ConfigError("step '" + step.value("id", std::string{}) + "' needs an emitter config");
  }
  return io::emitter_config_from_json(e);
}

std::optional<qfc::ConversionConfig> StepContext::conversion_for(const json& step) const {
  if (!scenario.contains("conversion") && !step.contains("conversion")) return std::nullopt;
  json c = scenario.value("conversion", json::object());
  if (step.contains("conversion")) c.merge_patch(step["conversion"]);
  return io::conversion_config_from_json(c);
}

const TagStream& StepContext::stream_for(const json& step) {
  const auto em = emitter_for(step);
  const std::string source = step.value("source", std::string("auto"));
  if (source != "auto" && source != "emitted" && source != "converted") {
    throw ConfigError("source must be \"auto\", \"emitted\" or \"converted\"");
  }
  auto conv = source == "emitted" ? std::nullopt : conversion_for(step);
  if (source == "converted" && !conv) throw ConfigError("source \"converted\" needs a conversion config");

  const std::string em_key = io::to_json(em).dump();
  const std::string conv_key = conv ? io::to_json(*conv).dump() : std::string("none");
  const std::string key = em_key + '|' + conv_key;
  if (auto it = stream_cache.find(key); it != stream_cache.end()) return it->second;

  auto emitted_key = em_key + "|none";
  if (!stream_cache.contains(emitted_key)) {
    stream_cache[emitted_key] = emitter::simulate_emission(em, derive_seed(seed, "emitter:" + em_key));
  }
  if (!conv) return stream_cache[emitted_key];
  const auto duration = em.n_pulses * emitter::pulse_period_ps(em.rep_rate_hz);
  auto converted = qfc::convert_stream(stream_cache[emitted_key], *conv, duration,
                                       derive_seed(seed, "conversion:" + key));
  return stream_cache[key] = std::move(converted);
}

void StepContext::emit(const std::string& step, const std::string& name, double value,
                       std::optional<double> sigma) {
  quantities.push_back({step, name, value, sigma});
}

void run_step(StepContext& ctx, const json& step, const std::string& id) {
  if (!step.contains("kind") || !step["kind"].is_string()) {
    throw ConfigError("step '" + id + "' needs a string \"kind\"");
  }
  const auto kind = step["kind"].get<std::string>();
  if (kind == "lifetime") return lifetime_step(ctx, step, id);
  if (kind == "g2") return g2_step(ctx, step, id);
  if (kind == "noise_density") return noise_density_step(ctx, step, id);
  if (kind == "noise_power_sweep") return noise_power_sweep_step(ctx, step, id);
  if (kind == "noise_flatness") return noise_flatness_step(ctx, step, id);
  if (kind == "efficiency_curve") return efficiency_curve_step(ctx, step, id);
  if (kind == "acceptance") return acceptance_step(ctx, step, id);
  if (kind == "loss_budget") return loss_budget_step(ctx, step, id);
  throw ConfigError("step '" + id + "': unknown kind '" + kind + "'");
}

}  // namespace qfcsim::scenario::detail
