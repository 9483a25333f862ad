#pragma once

#include <optional>
#include <span>

#include "qfcsim/analysis/least_squares.hpp"

namespace qfcsim::analysis {

// Photon-number conversion efficiency from optical powers:
// (p_out / p_in) * (lambda_out / lambda_in).
double photon_number_efficiency(double p_in_W, double p_out_W, double lambda_in_m, double lambda_out_m);

struct CorrectedEfficiency {
  double value = 0.0;
  bool unphysical = false;  // correction pushed the value above 1
};

// Undoes the residual reflection loss of the outcoupling optics:
// measured / (1 - coating_loss).
CorrectedEfficiency internal_efficiency(double measured_eta, double coating_loss = 0.08);

struct EfficiencyPoint {
  double pump_power_W = 0.0;
  double efficiency = 0.0;
  std::optional<double> sigma;
};

struct EfficiencyCurveFit {
  FitResult sine;    // "eta_max", "alpha_L2_per_W"; eta_max is bounded to (0, 1]
  FitResult linear;  // "slope_per_W", line through the origin
  bool linear_preferred = false;  // lower reduced chi-square
};

// Throws EstimatorError for fewer than 3 points, fewer than 2 distinct
// positive pump powers or an all-zero curve.
EfficiencyCurveFit fit_efficiency_curve(std::span<const EfficiencyPoint> points);

struct AcceptancePoint {
  double detuning_hz = 0.0;
  double efficiency = 0.0;
};

// Width of the contiguous region around the maximum where the efficiency is
// at least threshold * max, with linear interpolation at both crossings.
// Throws EstimatorError if either side never drops below the threshold.
double acceptance_bandwidth(std::span<const AcceptancePoint> points, double threshold = 0.8);

}  // namespace qfcsim::analysis
