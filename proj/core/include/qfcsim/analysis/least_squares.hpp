#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfcsim::analysis {

// Parameter estimates with 1-sigma uncertainties from the covariance at the
// optimum.
struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> sigmas;
  double chi2_reduced = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t n_points = 0;
  std::vector<std::string> flags;  // e.g. "singular_covariance", "tau_unidentifiable"

  double param(std::string_view name) const;
  double sigma(std::string_view name) const;
  bool has(std::string_view name) const;
  bool flagged(std::string_view flag) const;
};

// Model value at x; writes d(model)/d(param) into grad. Returning NaN marks
// the parameter vector as outside the model's domain.
using ModelFunction = std::function<double(double x, std::span<const double> p, std::span<double> grad)>;

enum class WeightMode {
  kSigma,         // absolute 1-sigma errors supplied per point
  kUnit,          // unweighted; covariance scaled by chi2_reduced
  kPoissonModel,  // counts: first pass var = max(y, 1), then var = max(model, floor)
};

struct FitOptions {
  std::size_t max_iterations = 500;
  std::size_t max_reweight_rounds = 30;
  double relative_step_tolerance = 1e-10;
  double gradient_tolerance = 1e-12;
  double poisson_variance_floor = 1e-6;
};

// Damped Gauss-Newton (Levenberg-Marquardt) on sum w_i (y_i - f(x_i))^2.
FitResult fit_least_squares(const ModelFunction& model, std::vector<std::string> names,
                            std::span<const double> x, std::span<const double> y,
                            std::span<const double> sigma, WeightMode mode,
                            std::vector<double> initial, const FitOptions& options = {});

}  // namespace qfcsim::analysis
