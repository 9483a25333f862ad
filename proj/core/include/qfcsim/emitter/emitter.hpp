#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qfcsim/core/random.hpp"
#include "qfcsim/core/timetag.hpp"

namespace qfcsim::emitter {

// Pulsed off-resonant excitation of a single emitter with bright/dark charge
// state blinking.
//
// p_detect_per_pulse is the unconditional detection probability per pulse
// (averaged over charge states); the bright-state probability is
// p_detect_per_pulse / beta. background_rate_cps is likewise a time-averaged
// rate. With background_gated the background is emitted only while the
// emitter is bright, at rate background_rate_cps / beta.
struct EmitterConfig {
  double rep_rate_hz = 1e6;
  std::uint64_t n_pulses = 0;
  double lifetime_ns = 7.47;
  double p_detect_per_pulse = 9.33e-4;
  double beta = 1.0;                  // stationary bright-state probability, (0, 1]
  double telegraph_tau_pulses = 7.5;  // bright/dark correlation time
  double background_rate_cps = 0.0;
  bool background_gated = false;
  double detector_jitter_ps_fwhm = 400.0;

  friend bool operator==(const EmitterConfig&, const EmitterConfig&) = default;
};

// Throws ConfigError describing the first violated constraint.
void validate(const EmitterConfig& config);

std::uint64_t pulse_period_ps(double rep_rate_hz);

// Per-pulse switching probabilities of the two-state charge process. Chosen so
// the state autocorrelation decays as exp(-n / telegraph_tau_pulses) exactly.
struct TelegraphRates {
  double bright_to_dark = 0.0;
  double dark_to_bright = 0.0;
};
TelegraphRates telegraph_rates(double beta, double telegraph_tau_pulses);

// Bunching amplitude of the bright-state autocorrelation, (1 - beta) / beta.
double bunching_amplitude(double beta) noexcept;

// Dwell-time sampler for the charge-state chain. Runs are geometric, so a run
// cut at a block boundary can be resampled without changing the distribution.
class ChargeStateProcess {
 public:
  ChargeStateProcess(double beta, double telegraph_tau_pulses);

  bool draw_stationary_state(RandomStream& rng) const;
  // Pulses spent in `bright` (>= 1) before the next switch.
  std::uint64_t draw_dwell(RandomStream& rng, bool bright) const;

 private:
  TelegraphRates rates_;
};

// Per-pulse charge state trace (1 = bright), generated block by block exactly
// as simulate_emission does.
std::vector<std::uint8_t> simulate_charge_trace(const EmitterConfig& config, std::uint64_t seed);

inline constexpr std::uint64_t kPulsesPerBlock = 1ULL << 20;

// Time-sorted channel-0 detections. Block b of kPulsesPerBlock pulses draws
// from substream {seed, b}; the charge state is handed from block to block.
TagStream simulate_emission(const EmitterConfig& config, std::uint64_t seed);

// Independently routes each tag to channel 0 or 1 with probability 1/2.
std::pair<TagStream, TagStream> split_50_50(const TagStream& tags, RngSeedContract seed);

}  // namespace qfcsim::emitter
