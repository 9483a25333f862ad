#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qfcsim/core/timetag.hpp"

namespace qfcsim::analysis {

enum class Normalization { kRaw, kCountsPerSecond };

// Detection times folded onto one excitation period.
//
// The counts-per-second view is counts / acquisition_s * (period / bin_width):
// the count rate a flat density at that level would give over a whole period.
// A flat background therefore reads as its rate in cts/s, and for a decay
// A * exp(-t / tau) the signal rate is A * tau / period.
struct Histogram {
  std::vector<std::uint64_t> bin_edges_ps;  // size() == counts.size() + 1
  std::vector<std::uint64_t> counts;
  Normalization normalization = Normalization::kRaw;
  std::uint64_t period_ps = 0;
  double acquisition_s = 0.0;

  std::size_t size() const noexcept { return counts.size(); }
  double bin_center_ps(std::size_t i) const;
  double bin_width_ps(std::size_t i) const;
  // Factor from raw counts to the selected normalization (1 for raw).
  double scale(std::size_t i) const;
  double value(std::size_t i) const { return static_cast<double>(counts[i]) * scale(i); }
  std::uint64_t total() const noexcept;
};

// Folds channel-0 and channel-1 tags modulo the pulse period and bins the
// offsets in [0, window_ps). Throws DomainError unless bin_width divides the
// window and the window fits in one period. When acquisition_s is given the
// histogram is normalized to counts per second.
Histogram histogram_vs_pulse(std::span<const TimeTagRecord> tags, double rep_rate_hz,
                             std::uint64_t bin_width_ps, std::uint64_t window_ps,
                             std::optional<double> acquisition_s = std::nullopt);

}  // namespace qfcsim::analysis
