#pragma once

// Behavioral model of a single memristive cell.
//
// A write pulse moves the conductance by a fixed step (g_max - g_min) / N_p
// plus Gaussian cycle-to-cycle noise whose standard deviation is a fraction
// gamma of the full conductance range. Reads add independent Gaussian noise.
// The same model, taken to the small-pulse limit, is the drift-diffusion
// process dG = mu dt + sigma dW used by latency_theory.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rrambb/rng.hpp"

namespace rrambb {

enum class Defect : std::uint8_t { healthy, stuck_on, stuck_off };

enum class Polarity : std::uint8_t { potentiate, depress, full_reset };

struct DeviceModel {
  std::string name = "custom";
  double g_min = 0.0;          // S
  double g_max = 0.0;          // S
  int n_states = 2;            // N_p
  double pulse_width = 0.0;    // s
  double gamma_pot = 0.0;      // fraction of range
  double gamma_dep = 0.0;      // fraction of range
  double v_set = 0.0;          // V
  double v_reset = 0.0;        // V
  double v_read = 0.0;         // V
  double v_full_reset = 0.0;   // V
  double sigma_read = 0.0;     // S

  double range() const { return g_max - g_min; }
  /// Mean conductance change of one write pulse.
  double step() const { return range() / n_states; }
  /// Read pulses last as long as write pulses.
  double read_time() const { return pulse_width; }
  double sigma_c_pot() const { return gamma_pot * range(); }
  double sigma_c_dep() const { return gamma_dep * range(); }

  /// Throws ConfigError naming the first field that breaks an invariant.
  void validate() const;

  bool operator==(const DeviceModel&) const = default;
};

struct CellState {
  double conductance = 0.0;
  Defect defect = Defect::healthy;
};

/// Table of characterized devices: ta_taox_pt, fefet, ftj_10ns, ftj_630ps.
DeviceModel preset(std::string_view name);
std::vector<std::string> preset_names();

struct DriftParams {
  double mu;       // S/s
  double sigma;    // S/sqrt(s)
  double sigma_c;  // S
};

/// Same device with cycle-to-cycle and read noise removed.
DeviceModel noiseless(DeviceModel model);

/// Continuous-model parameters; uses the potentiation variation.
DriftParams drift_params(const DeviceModel& model);

/// Conductance a cell presents to the array, honouring stuck defects.
double effective_conductance(const CellState& state, const DeviceModel& model);

CellState apply_write_pulse(CellState state, Polarity polarity, const DeviceModel& model, Rng& rng);

double read_conductance(const CellState& state, const DeviceModel& model, Rng& rng);

/// Ohmic dissipation of one pulse: V^2 * G * dt.
inline double pulse_energy(double volts, double conductance, double duration) {
  return volts * volts * conductance * duration;
}

}  // namespace rrambb
