#include "qfcsim/analysis/histogram.hpp"

#include <numeric>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/emitter/emitter.hpp"

namespace qfcsim::analysis {

double Histogram::bin_center_ps(std::size_t i) const {
  return 0.5 * (static_cast<double>(bin_edges_ps[i]) + static_cast<double>(bin_edges_ps[i + 1]));
}

double Histogram::bin_width_ps(std::size_t i) const {
  return static_cast<double>(bin_edges_ps[i + 1] - bin_edges_ps[i]);
}

double Histogram::scale(std::size_t i) const {
  if (normalization == Normalization::kRaw) {
    return 1.0;
  }
  return static_cast<double>(period_ps) / (bin_width_ps(i) * acquisition_s);
}

std::uint64_t Histogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Histogram histogram_vs_pulse(std::span<const TimeTagRecord> tags, double rep_rate_hz,
                             std::uint64_t bin_width_ps, std::uint64_t window_ps,
                             std::optional<double> acquisition_s) {
  const std::uint64_t period = emitter::pulse_period_ps(rep_rate_hz);
  if (bin_width_ps == 0 || window_ps == 0 || window_ps % bin_width_ps != 0) {
    throw DomainError("histogram: bin width must be positive and divide the window");
  }
  if (window_ps > period) {
    throw DomainError("histogram: window longer than the pulse period");
  }
  if (acquisition_s && !(*acquisition_s > 0.0)) {
    throw DomainError("histogram: acquisition time must be positive");
  }

  Histogram h;
  const std::uint64_t n_bins = window_ps / bin_width_ps;
  h.bin_edges_ps.resize(n_bins + 1);
  for (std::uint64_t i = 0; i <= n_bins; ++i) {
    h.bin_edges_ps[i] = i * bin_width_ps;
  }
  h.counts.assign(n_bins, 0);
  h.period_ps = period;
  for (const auto& tag : tags) {
    if (tag.channel == Channel::kSync) {
      continue;
    }
    const std::uint64_t offset = tag.time_ps % period;
    if (offset < window_ps) {
      ++h.counts[offset / bin_width_ps];
    }
  }
  if (acquisition_s) {
    h.normalization = Normalization::kCountsPerSecond;
    h.acquisition_s = *acquisition_s;
  }
  return h;
}

}  // namespace qfcsim::analysis
