#include "qfcsim/analysis/lifetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qfcsim/core/errors.hpp"

namespace qfcsim::analysis {

namespace {

double exponential_model(double t, std::span<const double> p, std::span<double> grad) {
  const double a = p[0];
  const double tau = p[1];
  if (!(tau > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double e = std::exp(-t / tau);
  grad[0] = e;
  grad[1] = a * e * t / (tau * tau);
  grad[2] = 1.0;
  return a * e + p[2];
}

}  // namespace

FitResult fit_exponential(const Histogram& hist, const ExponentialFitOptions& options) {
  std::vector<double> t_ns;
  std::vector<double> y;
  double scale = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double center = hist.bin_center_ps(i);
    if (center < static_cast<double>(options.fit_start_ps)) {
      continue;
    }
    if (options.fit_end_ps && center >= static_cast<double>(*options.fit_end_ps)) {
      continue;
    }
    if (t_ns.empty()) {
      scale = hist.scale(i);
    }
    t_ns.push_back(center * 1e-3);
    y.push_back(static_cast<double>(hist.counts[i]));
  }
  const auto non_empty = std::count_if(y.begin(), y.end(), [](double v) { return v > 0.0; });
  if (non_empty < 4) {
    throw EstimatorError("exponential fit needs at least 4 non-empty bins in the fit range");
  }

  // Background from the last decile, amplitude from the first bin, tau from a
  // weighted log-linear fit of the excess over background.
  const std::size_t n = y.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  const double b0 = std::accumulate(y.end() - static_cast<std::ptrdiff_t>(tail), y.end(), 0.0) /
                    static_cast<double>(tail);
  const double peak_excess = std::max(*std::max_element(y.begin(), y.end()) - b0, 1.0);
  double sw = 0, st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double excess = y[i] - b0;
    if (excess < 0.05 * peak_excess || excess <= 0.0) {
      continue;
    }
    const double w = excess;
    const double l = std::log(excess);
    sw += w;
    st += w * t_ns[i];
    sl += w * l;
    stt += w * t_ns[i] * t_ns[i];
    stl += w * t_ns[i] * l;
  }
  double tau0 = 0.25 * (t_ns.back() - t_ns.front());
  const double denom = sw * stt - st * st;
  if (sw > 0.0 && denom > 0.0) {
    const double slope = (sw * stl - st * sl) / denom;
    if (slope < 0.0) {
      tau0 = -1.0 / slope;
    }
  }
  const double a0 = std::max(y.front() - b0, 1.0) * std::exp(t_ns.front() / tau0);

  FitResult raw = fit_least_squares(exponential_model, {"A", "tau_ns", "B"}, t_ns, y, {},
                                    WeightMode::kPoissonModel, {a0, tau0, b0}, options.solver);
  for (const char* name : {"A", "B"}) {
    for (std::size_t k = 0; k < raw.names.size(); ++k) {
      if (raw.names[k] == name) {
        raw.params[k] *= scale;
        raw.sigmas[k] *= scale;
      }
    }
  }
  return raw;
}

double snr_after_pulse(const FitResult& fit) {
  const double b = fit.param("B");
  if (!(b > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return fit.param("A") / b;
}

}  // namespace qfcsim::analysis
