#pragma once

#include <cstdint>
#include <optional>

#include "qfcsim/analysis/histogram.hpp"
#include "qfcsim/analysis/least_squares.hpp"

namespace qfcsim::analysis {

struct ExponentialFitOptions {
  // Bins whose center lies before fit_start_ps are skipped (rise smeared by
  // detector jitter). Time zero of the model stays at the excitation pulse.
  std::uint64_t fit_start_ps = 0;
  std::optional<std::uint64_t> fit_end_ps;
  FitOptions solver;
};

// Fits f(t) = A * exp(-t / tau) + B to a pulse-folded histogram. Parameters
// are "A", "tau_ns", "B", with A and B in the histogram's normalization.
// Weights are Poisson: max(count, 1) on the first pass, then the model
// prediction. Throws EstimatorError with fewer than 4 non-empty bins.
FitResult fit_exponential(const Histogram& hist, const ExponentialFitOptions& options = {});

// Decay amplitude over flat background, A / B. +inf when B <= 0.
double snr_after_pulse(const FitResult& fit);

}  // namespace qfcsim::analysis
