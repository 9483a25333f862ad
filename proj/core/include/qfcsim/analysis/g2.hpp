#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qfcsim/analysis/least_squares.hpp"
#include "qfcsim/core/timetag.hpp"

namespace qfcsim::analysis {

// Cross-correlation of two detector arms, binned by pulse-index separation
// n = index(ch1) - index(ch0) for n in [-max_sep, max_sep].
struct G2Histogram {
  std::int64_t max_sep = 0;
  std::vector<std::uint64_t> counts;  // counts[n + max_sep]
  std::vector<double> g2;             // counts / baseline
  std::vector<double> sigma;          // sqrt(max(count, 1)) / baseline
  double baseline = 0.0;              // mean raw count over the baseline range
  std::int64_t baseline_min = 0;      // separations actually averaged
  std::int64_t baseline_max = 0;

  std::size_t size() const noexcept { return counts.size(); }
  std::int64_t separation(std::size_t i) const noexcept {
    return static_cast<std::int64_t>(i) - max_sep;
  }
  std::size_t index(std::int64_t n) const noexcept { return static_cast<std::size_t>(n + max_sep); }
  double g2_zero() const { return g2[index(0)]; }
  double g2_zero_sigma() const { return sigma[index(0)]; }
};

struct G2Options {
  // Baseline = mean count over baseline_min <= |n| <= baseline_max, clipped to
  // max_sep. When max_sep < baseline_min the upper half of [1, max_sep] is used.
  std::int64_t baseline_min = 25;
  std::int64_t baseline_max = 50;
};

// Pulse index of a detection: the nearest excitation pulse,
// floor((t + period / 2) / period).
std::int64_t pulse_index(std::uint64_t time_ps, std::uint64_t period_ps) noexcept;

// Throws EstimatorError when either arm is empty or the baseline is zero.
G2Histogram g2_pulsed(std::span<const TimeTagRecord> ch0, std::span<const TimeTagRecord> ch1,
                      double rep_rate_hz, std::int64_t max_sep, const G2Options& options = {});

struct BunchingFit {
  FitResult fit;  // "A", "tau_pulses"
  std::optional<double> g2_zero;
  std::optional<double> g2_zero_sigma;
};

// Fits g2(n) = 1 + A * exp(-|n| / tau) to all n != 0. The histogram overload
// works on raw coincidence counts with Poisson weights; g2(0) comes from the
// measured zero bin, not the model. The count model is normalized so that its
// mean over the baseline separations equals the measured baseline, which
// still carries a little bunching when tau is not small against baseline_min.
BunchingFit fit_bunching(const G2Histogram& g2, const FitOptions& options = {});

// Overload for tabulated g2 values. sigma may be empty (unit weights).
BunchingFit fit_bunching(std::span<const std::int64_t> separations, std::span<const double> g2,
                         std::span<const double> sigma = {}, const FitOptions& options = {});

}  // namespace qfcsim::analysis
