#include "rrambb/cost.hpp"

#include <algorithm>
#include <cmath>

#include "rrambb/types.hpp"

namespace rrambb {

void ProcessorProfile::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"fft_cycles", fft_cycles},         {"fft_clock", fft_clock},
      {"ffts_per_joule", ffts_per_joule}, {"det_clock", det_clock},
      {"forward_cycles", forward_cycles}, {"backward_cycles", backward_cycles},
      {"energy_per_bit", energy_per_bit}, {"bits_per_detection", bits_per_detection}};
  for (const auto& [key, v] : fields) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(key, "must be a positive coefficient");
  }
  if (reference_antennas < 1) throw ConfigError("reference_antennas", "must be >= 1");
}

ProcessorProfile combined_65nm_profile() {
  ProcessorProfile p;
  p.name = "combined_65nm";
  p.fft_cycles = 688;
  p.fft_clock = 250e6;
  p.ffts_per_joule = 2.07e6;
  p.det_clock = 625e6;
  p.forward_cycles = 24;
  p.backward_cycles = 12;
  p.energy_per_bit = 19.2e-12;
  p.bits_per_detection = 8;
  return p;
}

DigitalCost digital_cost(const DigitalWorkload& work, const ProcessorProfile& profile) {
  profile.validate();
  if (work.n_c < 1 || work.n_antennas < 1 || work.symbols < 0 || work.pilots < 0) {
    throw ConfigError("workload", "dimensions must be positive and counts non-negative");
  }
  const double ratio = static_cast<double>(work.n_antennas) / profile.reference_antennas;
  const double forward = profile.forward_cycles * ratio * ratio * ratio;
  const double backward = profile.backward_cycles * ratio * ratio;
  const double data = std::max(work.symbols - work.pilots, 0);
  // Pilot symbols are always transformed, even when the frame carries no data.
  const double ffts = data + work.pilots;

  DigitalCost c;
  c.fft_latency = profile.fft_cycles * ffts / profile.fft_clock;
  c.fft_energy = ffts / profile.ffts_per_joule;
  c.detect_latency = work.n_c * (forward + backward * data) / profile.det_clock;
  c.detect_energy = profile.energy_per_bit * profile.bits_per_detection * backward * data * work.n_c;
  return c;
}

}  // namespace rrambb
