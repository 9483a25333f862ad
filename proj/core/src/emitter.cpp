#include "qfcsim/emitter/emitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qfcsim/core/errors.hpp"

namespace qfcsim::emitter {

namespace {

constexpr double kFwhmToSigma = 0.42466090014400953;  // 1 / (2 sqrt(2 ln 2))

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw ConfigError("emitter: " + message);
  }
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max()
                                                            : a + b;
}

std::uint64_t to_tag_time(double t_ps) {
  return t_ps <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(t_ps));
}

// Walks the charge-state runs of one block and reports each run to `on_run`
// as (first pulse, end pulse, bright).
template <typename OnRun>
void walk_block(const ChargeStateProcess& process, RandomStream& rng, bool& bright,
                std::uint64_t first, std::uint64_t end, OnRun&& on_run) {
  std::uint64_t k = first;
  while (k < end) {
    const std::uint64_t dwell = process.draw_dwell(rng, bright);
    const std::uint64_t run_end = std::min(saturating_add(k, dwell), end);
    on_run(k, run_end, bright);
    // A run cut by the block boundary continues in the next block.
    if (run_end < end || saturating_add(k, dwell) == end) {
      bright = !bright;
    }
    k = run_end;
  }
}

}  // namespace

void validate(const EmitterConfig& c) {
  require(std::isfinite(c.rep_rate_hz) && c.rep_rate_hz > 0.0, "rep_rate_hz must be positive");
  require(c.rep_rate_hz <= 1e12, "rep_rate_hz above 1 THz cannot be resolved in picoseconds");
  require(std::isfinite(c.lifetime_ns) && c.lifetime_ns > 0.0, "lifetime_ns must be positive");
  require(c.beta > 0.0 && c.beta <= 1.0, "beta must lie in (0, 1]");
  require(std::isfinite(c.telegraph_tau_pulses) && c.telegraph_tau_pulses > 0.0,
          "telegraph_tau_pulses must be positive");
  require(c.p_detect_per_pulse >= 0.0 && c.p_detect_per_pulse < 1.0,
          "p_detect_per_pulse must lie in [0, 1)");
  require(c.p_detect_per_pulse / c.beta <= 1.0,
          "p_detect_per_pulse / beta exceeds 1 (bright-state detection probability)");
  require(std::isfinite(c.background_rate_cps) && c.background_rate_cps >= 0.0,
          "background_rate_cps must be non-negative");
  require(std::isfinite(c.detector_jitter_ps_fwhm) && c.detector_jitter_ps_fwhm >= 0.0,
          "detector_jitter_ps_fwhm must be non-negative");
  const double period_ns = 1e9 / c.rep_rate_hz;
  require(period_ns >= 5.0 * c.lifetime_ns,
          "pulse period must be much longer than the lifetime (period >= 5 lifetimes)");
}

std::uint64_t pulse_period_ps(double rep_rate_hz) {
  if (!(rep_rate_hz > 0.0)) {
    throw DomainError("rep_rate_hz must be positive");
  }
  const auto period = static_cast<std::uint64_t>(std::llround(1e12 / rep_rate_hz));
  if (period == 0) {
    throw DomainError("pulse period rounds to 0 ps");
  }
  return period;
}

TelegraphRates telegraph_rates(double beta, double telegraph_tau_pulses) {
  const double lambda = -std::expm1(-1.0 / telegraph_tau_pulses);
  return {(1.0 - beta) * lambda, beta * lambda};
}

double bunching_amplitude(double beta) noexcept { return (1.0 - beta) / beta; }

ChargeStateProcess::ChargeStateProcess(double beta, double telegraph_tau_pulses)
    : rates_(telegraph_rates(beta, telegraph_tau_pulses)) {}

bool ChargeStateProcess::draw_stationary_state(RandomStream& rng) const {
  const double total = rates_.bright_to_dark + rates_.dark_to_bright;
  const double beta = rates_.dark_to_bright / total;
  return rng.uniform() < beta;
}

std::uint64_t ChargeStateProcess::draw_dwell(RandomStream& rng, bool bright) const {
  const double leave = bright ? rates_.bright_to_dark : rates_.dark_to_bright;
  return saturating_add(rng.geometric_failures(leave), 1);
}

std::vector<std::uint8_t> simulate_charge_trace(const EmitterConfig& config, std::uint64_t seed) {
  validate(config);
  const ChargeStateProcess process(config.beta, config.telegraph_tau_pulses);
  std::vector<std::uint8_t> trace(config.n_pulses, 0);
  bool bright = false;
  for (std::uint64_t block = 0; block * kPulsesPerBlock < config.n_pulses; ++block) {
    RandomStream rng({seed, block});
    if (block == 0) {
      bright = process.draw_stationary_state(rng);
    }
    const std::uint64_t first = block * kPulsesPerBlock;
    const std::uint64_t end = std::min(first + kPulsesPerBlock, config.n_pulses);
    walk_block(process, rng, bright, first, end, [&](std::uint64_t a, std::uint64_t b, bool on) {
      std::fill(trace.begin() + static_cast<std::ptrdiff_t>(a),
                trace.begin() + static_cast<std::ptrdiff_t>(b), on ? 1 : 0);
    });
  }
  return trace;
}

TagStream simulate_emission(const EmitterConfig& config, std::uint64_t seed) {
  validate(config);
  TagStream tags;
  if (config.n_pulses == 0) {
    return tags;
  }

  const std::uint64_t period = pulse_period_ps(config.rep_rate_hz);
  const double period_s = static_cast<double>(period) * 1e-12;
  const double q_bright = config.p_detect_per_pulse / config.beta;
  const double lifetime_ps = config.lifetime_ns * 1e3;
  const double jitter_sigma = config.detector_jitter_ps_fwhm * kFwhmToSigma;
  const double bg_per_pulse_gated = config.background_rate_cps / config.beta * period_s;
  const double bg_per_pulse = config.background_rate_cps * period_s;
  const ChargeStateProcess process(config.beta, config.telegraph_tau_pulses);

  const double expected = static_cast<double>(config.n_pulses) *
                          (config.p_detect_per_pulse + config.background_rate_cps * period_s);
  tags.reserve(static_cast<std::size_t>(expected * 1.05 + 64));

  auto add_background = [&](RandomStream& rng, std::uint64_t first, std::uint64_t end, double per_pulse) {
    const double span = static_cast<double>(end - first);
    const std::uint64_t n = rng.poisson(per_pulse * span);
    const double origin = static_cast<double>(first) * static_cast<double>(period);
    const double width = span * static_cast<double>(period);
    for (std::uint64_t i = 0; i < n; ++i) {
      tags.push_back({Channel::kSignal, static_cast<std::uint64_t>(origin + rng.uniform() * width)});
    }
  };

  // Gated background lands inside the pulse-index window of a bright pulse,
  // [k P - P/2, k P + P/2), so it never leaks onto a neighbouring dark pulse.
  auto add_gated_background = [&](RandomStream& rng, std::uint64_t first, std::uint64_t end) {
    const std::uint64_t n = rng.poisson(bg_per_pulse_gated * static_cast<double>(end - first));
    const double span = static_cast<double>(end - first);
    const double p = static_cast<double>(period);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double u = rng.uniform() * span;
      const double pulse = static_cast<double>(first) + std::floor(u);
      const double t = pulse * p + (u - std::floor(u) - 0.5) * p;
      tags.push_back({Channel::kSignal, to_tag_time(t)});
    }
  };

  bool bright = false;
  for (std::uint64_t block = 0; block * kPulsesPerBlock < config.n_pulses; ++block) {
    RandomStream rng({seed, block});
    if (block == 0) {
      bright = process.draw_stationary_state(rng);
    }
    const std::uint64_t first = block * kPulsesPerBlock;
    const std::uint64_t end = std::min(first + kPulsesPerBlock, config.n_pulses);

    walk_block(process, rng, bright, first, end, [&](std::uint64_t a, std::uint64_t b, bool on) {
      if (!on) {
        return;
      }
      // Pulses that yield a detection are a Bernoulli(q) subsequence.
      std::uint64_t pulse = saturating_add(a, rng.geometric_failures(q_bright));
      while (pulse < b) {
        const double t = static_cast<double>(pulse) * static_cast<double>(period) +
                         rng.exponential(lifetime_ps) + rng.normal(0.0, jitter_sigma);
        tags.push_back({Channel::kSignal, to_tag_time(t)});
        pulse = saturating_add(pulse, saturating_add(rng.geometric_failures(q_bright), 1));
      }
      if (config.background_gated && bg_per_pulse_gated > 0.0) {
        add_gated_background(rng, a, b);
      }
    });
    if (!config.background_gated && bg_per_pulse > 0.0) {
      add_background(rng, first, end, bg_per_pulse);
    }
  }

  sort_tags(tags);
  return tags;
}

std::pair<TagStream, TagStream> split_50_50(const TagStream& tags, RngSeedContract seed) {
  RandomStream rng(seed);
  std::pair<TagStream, TagStream> arms;
  arms.first.reserve(tags.size() / 2 + 16);
  arms.second.reserve(tags.size() / 2 + 16);
  for (const auto& tag : tags) {
    if (rng.bernoulli(0.5)) {
      arms.second.push_back({Channel::kSecond, tag.time_ps});
    } else {
      arms.first.push_back({Channel::kSignal, tag.time_ps});
    }
  }
  return arms;
}

}  // namespace qfcsim::emitter
