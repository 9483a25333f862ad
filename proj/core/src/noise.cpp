#include "qfcsim/analysis/noise.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <cmath>

#include "qfcsim/core/errors.hpp"

namespace qfcsim::analysis {

namespace {

// Shortest interval of a unimodal distribution holding `mass`: search the
// lower-tail probability a so that the density is equal at both ends.
template <typename Dist>
CredibleInterval hpd_interval(const Dist& dist, double mass) {
  using boost::math::pdf;
  using boost::math::quantile;
  auto ends = [&](double a) {
    const double hi_p = std::min(a + mass, 1.0);
    return std::pair{quantile(dist, a), hi_p >= 1.0 ? quantile(dist, 1.0 - 1e-16) : quantile(dist, hi_p)};
  };
  auto imbalance = [&](double a) {
    const auto [lo, hi] = ends(a);
    return pdf(dist, lo) - pdf(dist, hi);
  };
  double a_lo = 0.0;
  double a_hi = 1.0 - mass;
  if (imbalance(a_lo) >= 0.0) {
    const auto [lo, hi] = ends(a_lo);
    return {lo, hi};
  }
  if (imbalance(a_hi) <= 0.0) {
    const auto [lo, hi] = ends(a_hi);
    return {lo, hi};
  }
  for (int i = 0; i < 200 && a_hi - a_lo > 1e-15; ++i) {
    const double mid = 0.5 * (a_lo + a_hi);
    (imbalance(mid) < 0.0 ? a_lo : a_hi) = mid;
  }
  const auto [lo, hi] = ends(0.5 * (a_lo + a_hi));
  return {lo, hi};
}

void require_credibility(double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw DomainError("credibility must lie in (0, 1)");
  }
}

}  // namespace

CredibleInterval poisson_rate_interval(std::uint64_t counts, double duration_s, double credibility) {
  require_credibility(credibility);
  if (!(duration_s > 0.0)) {
    throw DomainError("integration time must be positive");
  }
  if (counts == 0) {
    return {0.0, -std::log1p(-credibility) / duration_s};
  }
  const boost::math::gamma_distribution<double> posterior(static_cast<double>(counts) + 1.0,
                                                          1.0 / duration_s);
  return hpd_interval(posterior, credibility);
}

NoiseDensityEstimate noise_density(const NoiseMeasurement& m, double eta_snspd, double filter_fwhm_pm,
                                   std::optional<double> t_fbg, double dark_cps, double credibility) {
  if (!(eta_snspd > 0.0 && eta_snspd <= 1.0)) {
    throw DomainError("eta_snspd must lie in (0, 1]");
  }
  if (!(filter_fwhm_pm > 0.0)) {
    throw DomainError("filter FWHM must be positive");
  }
  const double transmission = t_fbg.value_or(1.0);
  if (!(transmission > 0.0 && transmission <= 1.0)) {
    throw DomainError("t_fbg must lie in (0, 1]");
  }
  if (dark_cps < 0.0) {
    throw DomainError("dark count rate must be non-negative");
  }
  const double norm = eta_snspd * filter_fwhm_pm * transmission;
  const CredibleInterval total = poisson_rate_interval(m.counts, m.duration_s, credibility);

  NoiseDensityEstimate est;
  est.count_rate_cps = static_cast<double>(m.counts) / m.duration_s;
  est.density_cts_s_pm = std::max(est.count_rate_cps - dark_cps, 0.0) / norm;
  est.ci68.low = std::max(total.low - dark_cps, 0.0) / norm;
  est.ci68.high = std::max(total.high - dark_cps, 0.0) / norm;
  return est;
}

NoiseDensityEstimate noise_density(double count_rate_cps, double duration_s, double eta_snspd,
                                   double filter_fwhm_pm, std::optional<double> t_fbg, double dark_cps,
                                   double credibility) {
  if (count_rate_cps < 0.0 || !(duration_s > 0.0)) {
    throw DomainError("count rate must be >= 0 and duration positive");
  }
  const auto counts = static_cast<std::uint64_t>(std::llround(count_rate_cps * duration_s));
  return noise_density(NoiseMeasurement{counts, duration_s}, eta_snspd, filter_fwhm_pm, t_fbg, dark_cps,
                       credibility);
}

FractionEstimate survival_fraction(std::uint64_t survived, std::uint64_t total, double credibility) {
  require_credibility(credibility);
  if (total == 0 || survived > total) {
    throw DomainError("survival_fraction needs 0 <= survived <= total, total > 0");
  }
  const boost::math::beta_distribution<double> posterior(static_cast<double>(survived) + 1.0,
                                                         static_cast<double>(total - survived) + 1.0);
  return {static_cast<double>(survived) / static_cast<double>(total), hpd_interval(posterior, credibility)};
}

}  // namespace qfcsim::analysis
