#include "qfcsim/analysis/least_squares.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qfcsim/core/errors.hpp"

namespace qfcsim::analysis {

namespace {

std::size_t index_of(const FitResult& r, std::string_view name) {
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    if (r.names[i] == name) {
      return i;
    }
  }
  throw std::out_of_range("fit result has no parameter '" + std::string(name) + "'");
}

struct Linearization {
  Eigen::MatrixXd jtj;
  Eigen::VectorXd jtr;
  double cost = std::numeric_limits<double>::infinity();
};

class Problem {
 public:
  Problem(const ModelFunction& model, std::span<const double> x, std::span<const double> y,
          std::size_t n_params)
      : model_(model), x_(x), y_(y), grad_(n_params) {}

  // Weighted cost at p; infinite outside the model domain.
  double cost(const std::vector<double>& p, const Eigen::VectorXd& w) {
    double c = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double f = model_(x_[i], p, grad_);
      if (!std::isfinite(f)) {
        return std::numeric_limits<double>::infinity();
      }
      const double r = y_[i] - f;
      c += w[static_cast<Eigen::Index>(i)] * r * r;
    }
    return c;
  }

  Linearization linearize(const std::vector<double>& p, const Eigen::VectorXd& w) {
    const auto n_par = static_cast<Eigen::Index>(p.size());
    Linearization lin{Eigen::MatrixXd::Zero(n_par, n_par), Eigen::VectorXd::Zero(n_par), 0.0};
    Eigen::VectorXd g(n_par);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double f = model_(x_[i], p, grad_);
      const double r = y_[i] - f;
      for (Eigen::Index k = 0; k < n_par; ++k) {
        g[k] = grad_[static_cast<std::size_t>(k)];
      }
      const double wi = w[static_cast<Eigen::Index>(i)];
      lin.jtj.noalias() += wi * g * g.transpose();
      lin.jtr.noalias() += wi * r * g;
      lin.cost += wi * r * r;
    }
    return lin;
  }

  std::vector<double> model_values(const std::vector<double>& p) {
    std::vector<double> out(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      out[i] = model_(x_[i], p, grad_);
    }
    return out;
  }

 private:
  const ModelFunction& model_;
  std::span<const double> x_;
  std::span<const double> y_;
  std::vector<double> grad_;
};

struct InnerResult {
  std::vector<double> params;
  bool converged = false;
  std::size_t iterations = 0;
};

InnerResult levenberg_marquardt(Problem& problem, std::vector<double> p, const Eigen::VectorXd& w,
                                const FitOptions& options) {
  InnerResult result;
  double lambda = 1e-3;
  Linearization lin = problem.linearize(p, w);
  const auto n_par = static_cast<Eigen::Index>(p.size());

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    if (lin.jtr.lpNorm<Eigen::Infinity>() < options.gradient_tolerance || lin.cost == 0.0) {
      result.converged = true;
      break;
    }
    const double diag_floor = std::max(lin.jtj.diagonal().maxCoeff(), 1.0) * 1e-15;
    bool accepted = false;
    while (!accepted && lambda < 1e20) {
      Eigen::MatrixXd damped = lin.jtj;
      for (Eigen::Index k = 0; k < n_par; ++k) {
        damped(k, k) += lambda * std::max(lin.jtj(k, k), diag_floor);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(lin.jtr);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> trial(p);
      for (Eigen::Index k = 0; k < n_par; ++k) {
        trial[static_cast<std::size_t>(k)] += step[k];
      }
      const double trial_cost = problem.cost(trial, w);
      if (trial_cost <= lin.cost) {
        accepted = true;
        bool small_step = true;
        for (Eigen::Index k = 0; k < n_par; ++k) {
          const double scale = std::abs(trial[static_cast<std::size_t>(k)]) + 1e-30;
          if (std::abs(step[k]) > options.relative_step_tolerance * scale) {
            small_step = false;
          }
        }
        p = std::move(trial);
        lin = problem.linearize(p, w);
        lambda = std::max(lambda / 10.0, 1e-12);
        if (small_step) {
          result.converged = true;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) {
      // No downhill step at any damping: p is a minimum to machine precision.
      result.converged = lin.jtr.lpNorm<Eigen::Infinity>() <
                         1e-6 * std::max(1.0, std::sqrt(lin.cost));
      break;
    }
    if (result.converged) {
      break;
    }
  }
  result.params = std::move(p);
  return result;
}

}  // namespace

double FitResult::param(std::string_view name) const { return params[index_of(*this, name)]; }

double FitResult::sigma(std::string_view name) const { return sigmas[index_of(*this, name)]; }

bool FitResult::has(std::string_view name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool FitResult::flagged(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

FitResult fit_least_squares(const ModelFunction& model, std::vector<std::string> names,
                            std::span<const double> x, std::span<const double> y,
                            std::span<const double> sigma, WeightMode mode,
                            std::vector<double> initial, const FitOptions& options) {
  const std::size_t n = x.size();
  const std::size_t n_par = initial.size();
  if (y.size() != n || names.size() != n_par) {
    throw std::invalid_argument("fit_least_squares: size mismatch");
  }
  if (mode == WeightMode::kSigma && sigma.size() != n) {
    throw std::invalid_argument("fit_least_squares: sigma size mismatch");
  }
  if (n <= n_par) {
    throw EstimatorError("fit needs more points than parameters");
  }

  Problem problem(model, x, y, n_par);
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double wi = 1.0;
    if (mode == WeightMode::kSigma) {
      wi = sigma[i] > 0.0 ? 1.0 / (sigma[i] * sigma[i]) : 0.0;
    } else if (mode == WeightMode::kPoissonModel) {
      wi = 1.0 / std::max(y[i], 1.0);
    }
    w[static_cast<Eigen::Index>(i)] = wi;
  }
  if (!std::isfinite(problem.cost(initial, w))) {
    throw EstimatorError("initial parameters outside the model domain");
  }

  InnerResult inner = levenberg_marquardt(problem, initial, w, options);
  std::size_t iterations = inner.iterations;

  if (mode == WeightMode::kPoissonModel) {
    // Reweight on the model prediction until the fixed point (Poisson MLE).
    for (std::size_t round = 0; round < options.max_reweight_rounds; ++round) {
      const auto f = problem.model_values(inner.params);
      for (std::size_t i = 0; i < n; ++i) {
        w[static_cast<Eigen::Index>(i)] = 1.0 / std::max(f[i], options.poisson_variance_floor);
      }
      const auto previous = inner.params;
      inner = levenberg_marquardt(problem, previous, w, options);
      iterations += inner.iterations;
      bool settled = true;
      for (std::size_t k = 0; k < n_par; ++k) {
        const double scale = std::abs(inner.params[k]) + 1e-30;
        if (std::abs(inner.params[k] - previous[k]) > 1e-9 * scale) {
          settled = false;
        }
      }
      if (settled) {
        break;
      }
    }
  }

  FitResult result;
  result.names = std::move(names);
  result.params = inner.params;
  result.converged = inner.converged;
  result.iterations = iterations;
  result.n_points = n;

  const Linearization lin = problem.linearize(result.params, w);
  const double dof = static_cast<double>(n - n_par);
  result.chi2_reduced = lin.cost / dof;

  result.sigmas.assign(n_par, std::numeric_limits<double>::quiet_NaN());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lin.jtj);
  lu.setThreshold(1e-12);
  if (lu.isInvertible()) {
    Eigen::MatrixXd cov = lu.inverse();
    if (mode == WeightMode::kUnit) {
      cov *= result.chi2_reduced;
    }
    for (std::size_t k = 0; k < n_par; ++k) {
      const double v = cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      result.sigmas[k] = v >= 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN();
    }
  } else {
    result.flags.emplace_back("singular_covariance");
  }
  if (!result.converged) {
    result.flags.emplace_back("not_converged");
  }
  return result;
}

}  // namespace qfcsim::analysis
