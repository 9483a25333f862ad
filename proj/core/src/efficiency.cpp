#include "qfcsim/analysis/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "qfcsim/core/errors.hpp"

namespace qfcsim::analysis {

namespace {

double sine_model(double power, std::span<const double> p, std::span<double> grad) {
  const double eta_max = p[0];
  const double alpha = p[1];
  if (alpha < 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double u = std::sqrt(alpha * power);
  const double s = std::sin(u);
  grad[0] = s * s;
  // d/d(alpha) sin^2(sqrt(alpha P)) = sin(2u) * P / (2u), -> P as u -> 0.
  const double dsin2 = u < 1e-8 ? power : std::sin(2.0 * u) * power / (2.0 * u);
  grad[1] = eta_max * dsin2;
  return eta_max * s * s;
}

struct Weighted {
  std::vector<double> power;
  std::vector<double> eta;
  std::vector<double> weight;
  std::vector<double> sigma;
  bool have_sigma = false;
};

}  // namespace

double photon_number_efficiency(double p_in_W, double p_out_W, double lambda_in_m, double lambda_out_m) {
  if (!(p_in_W > 0.0)) {
    throw DomainError("input power must be positive");
  }
  if (!(p_out_W >= 0.0)) {
    throw DomainError("output power must be non-negative");
  }
  if (!(lambda_in_m > 0.0) || !(lambda_out_m > 0.0)) {
    throw DomainError("wavelengths must be positive");
  }
  return (p_out_W / p_in_W) * (lambda_out_m / lambda_in_m);
}

CorrectedEfficiency internal_efficiency(double measured_eta, double coating_loss) {
  if (measured_eta < 0.0 || measured_eta > 1.0) {
    throw DomainError("measured efficiency must lie in [0, 1]");
  }
  if (coating_loss < 0.0 || coating_loss >= 1.0) {
    throw DomainError("coating loss must lie in [0, 1)");
  }
  const double value = measured_eta / (1.0 - coating_loss);
  return {value, value > 1.0};
}

EfficiencyCurveFit fit_efficiency_curve(std::span<const EfficiencyPoint> points) {
  if (points.size() < 3) {
    throw EstimatorError("efficiency fit needs at least 3 points");
  }
  Weighted d;
  d.have_sigma = std::all_of(points.begin(), points.end(),
                             [](const auto& p) { return p.sigma && *p.sigma > 0.0; });
  std::set<double> distinct;
  for (const auto& p : points) {
    if (p.pump_power_W < 0.0) {
      throw EstimatorError("negative pump power in efficiency data");
    }
    if (p.pump_power_W > 0.0) {
      distinct.insert(p.pump_power_W);
    }
    d.power.push_back(p.pump_power_W);
    d.eta.push_back(p.efficiency);
    const double s = d.have_sigma ? *p.sigma : 1.0;
    d.sigma.push_back(s);
    d.weight.push_back(1.0 / (s * s));
  }
  if (distinct.size() < 2) {
    throw EstimatorError("efficiency fit needs at least 2 distinct positive pump powers");
  }
  if (std::all_of(d.eta.begin(), d.eta.end(), [](double e) { return e == 0.0; })) {
    throw EstimatorError("efficiency data are identically zero");
  }
  const WeightMode mode = d.have_sigma ? WeightMode::kSigma : WeightMode::kUnit;
  const std::span<const double> sigma = d.have_sigma ? std::span<const double>(d.sigma)
                                                     : std::span<const double>();
  const double p_max = *distinct.rbegin();

  EfficiencyCurveFit out;

  // Line through the origin, closed form.
  {
    double spp = 0, spe = 0;
    for (std::size_t i = 0; i < d.power.size(); ++i) {
      spp += d.weight[i] * d.power[i] * d.power[i];
      spe += d.weight[i] * d.power[i] * d.eta[i];
    }
    const double slope = spe / spp;
    double chi2 = 0;
    for (std::size_t i = 0; i < d.power.size(); ++i) {
      const double r = d.eta[i] - slope * d.power[i];
      chi2 += d.weight[i] * r * r;
    }
    FitResult& lin = out.linear;
    lin.names = {"slope_per_W"};
    lin.params = {slope};
    lin.n_points = d.power.size();
    lin.chi2_reduced = chi2 / static_cast<double>(d.power.size() - 1);
    const double var = (d.have_sigma ? 1.0 : lin.chi2_reduced) / spp;
    lin.sigmas = {std::sqrt(var)};
    lin.converged = true;
  }

  // Coarse scan over the phase at the largest power, eta_max in closed form,
  // then Levenberg-Marquardt.
  double best_cost = std::numeric_limits<double>::infinity();
  double best_alpha = 0.0;
  double best_eta = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double u_max = std::numbers::pi * k / 400.0;
    const double alpha = u_max * u_max / p_max;
    double sss = 0, sse = 0;
    for (std::size_t i = 0; i < d.power.size(); ++i) {
      const double s = std::pow(std::sin(std::sqrt(alpha * d.power[i])), 2);
      sss += d.weight[i] * s * s;
      sse += d.weight[i] * s * d.eta[i];
    }
    if (sss <= 0.0) {
      continue;
    }
    const double eta_max = std::clamp(sse / sss, 1e-12, 1.0);
    double cost = 0.0;
    for (std::size_t i = 0; i < d.power.size(); ++i) {
      const double r = d.eta[i] - eta_max * std::pow(std::sin(std::sqrt(alpha * d.power[i])), 2);
      cost += d.weight[i] * r * r;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_alpha = alpha;
      best_eta = eta_max;
    }
  }

  out.sine = fit_least_squares(sine_model, {"eta_max", "alpha_L2_per_W"}, d.power, d.eta, sigma, mode,
                               {best_eta, best_alpha});
  if (out.sine.param("eta_max") > 1.0) {
    // Refit with eta_max pinned at its physical bound.
    auto pinned = [](double power, std::span<const double> p, std::span<double> grad) {
      const double full[2] = {1.0, p[0]};
      double g[2] = {0.0, 0.0};
      const double v = sine_model(power, full, g);
      grad[0] = g[1];
      return v;
    };
    FitResult alpha_only = fit_least_squares(pinned, {"alpha_L2_per_W"}, d.power, d.eta, sigma, mode,
                                             {out.sine.param("alpha_L2_per_W")});
    out.sine.params = {1.0, alpha_only.params[0]};
    out.sine.sigmas = {0.0, alpha_only.sigmas[0]};
    out.sine.chi2_reduced = alpha_only.chi2_reduced * static_cast<double>(d.power.size() - 1) /
                            static_cast<double>(d.power.size() - 2);
    out.sine.converged = alpha_only.converged;
    out.sine.flags = alpha_only.flags;
    out.sine.flags.emplace_back("eta_max_at_bound");
  }
  out.linear_preferred = out.linear.chi2_reduced < out.sine.chi2_reduced;
  return out;
}

double acceptance_bandwidth(std::span<const AcceptancePoint> points, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw DomainError("threshold must lie in (0, 1)");
  }
  if (points.size() < 3) {
    throw EstimatorError("acceptance bandwidth needs at least 3 points");
  }
  std::vector<AcceptancePoint> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.detuning_hz < b.detuning_hz; });
  const auto peak = std::max_element(p.begin(), p.end(),
                                     [](const auto& a, const auto& b) { return a.efficiency < b.efficiency; });
  const double level = threshold * peak->efficiency;
  if (!(peak->efficiency > 0.0)) {
    throw EstimatorError("acceptance data have no positive efficiency");
  }
  auto crossing = [level](const AcceptancePoint& inside, const AcceptancePoint& outside) {
    const double f = (inside.efficiency - level) / (inside.efficiency - outside.efficiency);
    return inside.detuning_hz + f * (outside.detuning_hz - inside.detuning_hz);
  };

  const auto ipeak = static_cast<std::size_t>(peak - p.begin());
  std::size_t i = ipeak;
  while (i > 0 && p[i - 1].efficiency >= level) {
    --i;
  }
  if (i == 0) {
    throw EstimatorError("no threshold crossing below the peak detuning");
  }
  const double left = crossing(p[i], p[i - 1]);
  std::size_t j = ipeak;
  while (j + 1 < p.size() && p[j + 1].efficiency >= level) {
    ++j;
  }
  if (j + 1 == p.size()) {
    throw EstimatorError("no threshold crossing above the peak detuning");
  }
  const double right = crossing(p[j], p[j + 1]);
  return right - left;
}

}  // namespace qfcsim::analysis
