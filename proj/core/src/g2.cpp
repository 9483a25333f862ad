#include "qfcsim/analysis/g2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/emitter/emitter.hpp"

namespace qfcsim::analysis {

namespace {

std::vector<std::int64_t> pulse_indices(std::span<const TimeTagRecord> tags, std::uint64_t period) {
  std::vector<std::int64_t> out;
  out.reserve(tags.size());
  for (const auto& tag : tags) {
    if (tag.channel != Channel::kSync) {
      out.push_back(pulse_index(tag.time_ps, period));
    }
  }
  return out;
}

// Initial (A, tau) from the excess over 1 at the smallest separations.
std::pair<double, double> bunching_guess(std::span<const double> t, std::span<const double> excess) {
  double a0 = 0.0;
  double t_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    t_min = std::min(t_min, t[i]);
  }
  std::size_t n_at_min = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == t_min) {
      a0 += excess[i];
      ++n_at_min;
    }
  }
  a0 /= static_cast<double>(std::max<std::size_t>(n_at_min, 1));

  double sw = 0, st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (a0 <= 0.0 || excess[i] < 0.1 * a0) {
      continue;
    }
    const double w = excess[i];
    const double l = std::log(excess[i]);
    sw += w;
    st += w * t[i];
    sl += w * l;
    stt += w * t[i] * t[i];
    stl += w * t[i] * l;
  }
  double tau0 = 5.0;
  const double denom = sw * stt - st * st;
  if (sw > 0.0 && denom > 0.0) {
    const double slope = (sw * stl - st * sl) / denom;
    if (slope < 0.0) {
      tau0 = -1.0 / slope;
    }
  }
  a0 = a0 > 0.0 ? a0 * std::exp(t_min / tau0) : 1e-3;
  return {a0, tau0};
}

void flag_identifiability(FitResult& fit) {
  const double a = fit.param("A");
  const double sa = fit.sigma("A");
  const double st = fit.sigma("tau_pulses");
  if (fit.flagged("singular_covariance") || !std::isfinite(st) ||
      (std::isfinite(sa) && std::abs(a) <= 2.0 * sa) || std::abs(a) < 1e-9) {
    fit.flags.emplace_back("tau_unidentifiable");
  }
}

}  // namespace

std::int64_t pulse_index(std::uint64_t time_ps, std::uint64_t period_ps) noexcept {
  return static_cast<std::int64_t>((time_ps + period_ps / 2) / period_ps);
}

G2Histogram g2_pulsed(std::span<const TimeTagRecord> ch0, std::span<const TimeTagRecord> ch1,
                      double rep_rate_hz, std::int64_t max_sep, const G2Options& options) {
  if (max_sep < 1) {
    throw DomainError("g2_pulsed: max_sep must be >= 1");
  }
  const std::uint64_t period = emitter::pulse_period_ps(rep_rate_hz);
  const auto a = pulse_indices(ch0, period);
  const auto b = pulse_indices(ch1, period);
  if (a.empty() || b.empty()) {
    throw EstimatorError("g2_pulsed: both detector arms need at least one tag");
  }
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end())) {
    throw DomainError("g2_pulsed: input streams must be time-sorted");
  }

  G2Histogram h;
  h.max_sep = max_sep;
  h.counts.assign(static_cast<std::size_t>(2 * max_sep + 1), 0);
  std::size_t lo = 0;
  for (const std::int64_t ia : a) {
    while (lo < b.size() && b[lo] < ia - max_sep) {
      ++lo;
    }
    for (std::size_t j = lo; j < b.size() && b[j] <= ia + max_sep; ++j) {
      ++h.counts[h.index(b[j] - ia)];
    }
  }

  std::int64_t bmin = options.baseline_min;
  std::int64_t bmax = std::min(options.baseline_max, max_sep);
  if (bmin > bmax) {
    bmin = std::max<std::int64_t>(1, (max_sep + 1) / 2);
    bmax = max_sep;
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::int64_t s = bmin; s <= bmax; ++s) {
    sum += static_cast<double>(h.counts[h.index(s)] + h.counts[h.index(-s)]);
    n += 2;
  }
  h.baseline = sum / static_cast<double>(n);
  h.baseline_min = bmin;
  h.baseline_max = bmax;
  if (!(h.baseline > 0.0)) {
    throw EstimatorError("g2_pulsed: no coincidences in the baseline range");
  }
  h.g2.resize(h.counts.size());
  h.sigma.resize(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double c = static_cast<double>(h.counts[i]);
    h.g2[i] = c / h.baseline;
    h.sigma[i] = std::sqrt(std::max(c, 1.0)) / h.baseline;
  }
  return h;
}

BunchingFit fit_bunching(const G2Histogram& g2, const FitOptions& options) {
  std::vector<double> t;
  std::vector<double> counts;
  std::vector<double> excess;
  for (std::size_t i = 0; i < g2.size(); ++i) {
    const auto n = g2.separation(i);
    if (n == 0) {
      continue;
    }
    t.push_back(static_cast<double>(std::abs(n)));
    counts.push_back(static_cast<double>(g2.counts[i]));
    excess.push_back(g2.g2[i] - 1.0);
  }
  if (t.size() < 4) {
    throw EstimatorError("bunching fit needs at least 4 nonzero separations");
  }
  const double base = g2.baseline;
  // A histogram without a recorded baseline range is taken as normalized to
  // the true asymptote.
  const std::int64_t bmin = g2.baseline_max > 0 ? std::max<std::int64_t>(g2.baseline_min, 1) : 1;
  const std::int64_t bmax = g2.baseline_max > 0 ? std::max(bmin, g2.baseline_max) : 0;
  // counts(n) = base * (1 + A e(n)) / (1 + A m), m = mean of e over the baseline range
  auto model = [base, bmin, bmax](double x, std::span<const double> p, std::span<double> grad) {
    const double a = p[0];
    const double tau = p[1];
    if (!(tau > 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    double m = 0.0;
    double dm = 0.0;
    for (std::int64_t s = bmin; s <= bmax; ++s) {
      const double es = std::exp(-static_cast<double>(s) / tau);
      m += es;
      dm += es * static_cast<double>(s);
    }
    if (bmax >= bmin) {
      const double k = static_cast<double>(bmax - bmin + 1);
      m /= k;
      dm /= k * tau * tau;
    }
    const double e = std::exp(-x / tau);
    const double de = e * x / (tau * tau);
    const double den = 1.0 + a * m;
    if (!(den > 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    grad[0] = base * (e - m) / (den * den);
    grad[1] = base * a * (de * den - (1.0 + a * e) * dm) / (den * den);
    return base * (1.0 + a * e) / den;
  };
  const auto [a0, tau0] = bunching_guess(t, excess);
  BunchingFit out;
  out.fit = fit_least_squares(model, {"A", "tau_pulses"}, t, counts, {}, WeightMode::kPoissonModel,
                              {a0, tau0}, options);
  flag_identifiability(out.fit);
  out.g2_zero = g2.g2_zero();
  out.g2_zero_sigma = g2.g2_zero_sigma();
  return out;
}

BunchingFit fit_bunching(std::span<const std::int64_t> separations, std::span<const double> g2,
                         std::span<const double> sigma, const FitOptions& options) {
  if (separations.size() != g2.size() || (!sigma.empty() && sigma.size() != g2.size())) {
    throw std::invalid_argument("fit_bunching: size mismatch");
  }
  BunchingFit out;
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> s;
  std::vector<double> excess;
  for (std::size_t i = 0; i < g2.size(); ++i) {
    if (separations[i] == 0) {
      out.g2_zero = g2[i];
      if (!sigma.empty()) {
        out.g2_zero_sigma = sigma[i];
      }
      continue;
    }
    t.push_back(static_cast<double>(std::abs(separations[i])));
    y.push_back(g2[i]);
    excess.push_back(g2[i] - 1.0);
    if (!sigma.empty()) {
      s.push_back(sigma[i]);
    }
  }
  if (t.size() < 4) {
    throw EstimatorError("bunching fit needs at least 4 nonzero separations");
  }
  auto model = [](double x, std::span<const double> p, std::span<double> grad) {
    if (!(p[1] > 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double e = std::exp(-x / p[1]);
    grad[0] = e;
    grad[1] = p[0] * e * x / (p[1] * p[1]);
    return 1.0 + p[0] * e;
  };
  const auto [a0, tau0] = bunching_guess(t, excess);
  out.fit = fit_least_squares(model, {"A", "tau_pulses"}, t, y, s,
                              sigma.empty() ? WeightMode::kUnit : WeightMode::kSigma, {a0, tau0},
                              options);
  flag_identifiability(out.fit);
  return out;
}

}  // namespace qfcsim::analysis
