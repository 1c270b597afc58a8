#pragma once

// Latency and energy of a conventional digital baseband for comparison:
// one FFT per OFDM symbol on a dedicated FFT processor, then LU-based
// detection with forward elimination once per sub-carrier and back
// substitution once per data symbol and sub-carrier.

#include <string>

namespace rrambb {

struct ProcessorProfile {
  std::string name;
  double fft_cycles = 0;        // clock cycles per FFT block
  double fft_clock = 0;         // Hz
  double ffts_per_joule = 0;    // FFT energy efficiency
  double det_clock = 0;         // Hz
  double forward_cycles = 0;    // forward elimination per sub-carrier, at reference_antennas
  double backward_cycles = 0;   // back substitution per data symbol, at reference_antennas
  double energy_per_bit = 0;    // J/b of one detection
  double bits_per_detection = 0;
  int reference_antennas = 4;

  /// Throws ConfigError naming the first missing or non-positive coefficient.
  void validate() const;
};

/// 65 nm FFT processor (688 cycles at 250 MHz, 2.07 FFTs/uJ) paired with a
/// 65 nm LU detector (625 MHz, 19.2 pJ/b over 8 b).
ProcessorProfile combined_65nm_profile();

struct DigitalWorkload {
  int n_c = 1024;
  int n_antennas = 4;
  int symbols = 2240;  // OFDM symbols per frame, pilots included
  int pilots = 4;
};

struct DigitalCost {
  double fft_latency = 0;     // s
  double detect_latency = 0;  // s
  double fft_energy = 0;      // J
  double detect_energy = 0;   // J
  double latency() const { return fft_latency + detect_latency; }
  double energy() const { return fft_energy + detect_energy; }
};

/// Detection cycle counts scale with antenna count as N^3 (forward) and N^2
/// (backward) relative to the profile's reference size.
DigitalCost digital_cost(const DigitalWorkload& work, const ProcessorProfile& profile);

}  // namespace rrambb
