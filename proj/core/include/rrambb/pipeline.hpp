#pragma once

// End-to-end MIMO-OFDM frames over the RRAM receiver.
//
// Frame layout: `symbols` OFDM symbols, the first `pilots` of which carry a
// unitary pilot (antenna a sends P(a, p) on every sub-carrier in slot p).
// Data symbols carry Gray-mapped 16-QAM on every sub-carrier of every
// transmit antenna. The transmitter is exact; the receiver removes the
// cyclic prefix, runs the crossbar DFT, estimates the channel from the
// pilots, programs one detector bank (flat fading) or one per sub-carrier,
// and detects every data symbol on the crossbar.
//
// Accounting: the DFT arrays are static and programmed once, outside the
// frame. Frame latency is the detector programming time plus one DFT read
// and one detector read per OFDM symbol (sub-carriers are detected by
// parallel banks). Energy sums every read over all sub-carriers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrambb/cost.hpp"
#include "rrambb/crossbar.hpp"
#include "rrambb/image.hpp"
#include "rrambb/mimo.hpp"
#include "rrambb/modem.hpp"
#include "rrambb/ofdm.hpp"

namespace rrambb {

enum class Backend : std::uint8_t { digital, rram };
const char* to_string(Backend backend);
Backend backend_from_string(const std::string& s);

enum class Fading : std::uint8_t { rayleigh, identity };
const char* to_string(Fading fading);
Fading fading_from_string(const std::string& s);

struct FrameConfig {
  int n_c = 1024;
  int n_t = 4;
  int n_r = 4;
  int pilots = 4;
  int symbols = 2240;  // M, pilots included
  int cp_len = -1;     // n_c / 8 when negative
  double snr_db = 20.0;
  bool flat = true;
  Fading fading = Fading::rayleigh;

  Backend backend = Backend::rram;
  Scheme scheme = Scheme::with_verification;
  mimo::DetectorMode detector = mimo::DetectorMode::lmmse;
  bool rram_dft = true;
  bool rram_detector = true;
  bool rram_idft = false;
  /// Ideal programming: cells land exactly on target.
  bool exact_programming = false;
  /// Program the left and right detector pairs one after the other instead
  /// of concurrently.
  bool sequential_pairs = false;

  DeviceModel device = preset("ta_taox_pt");
  int copies = 1;  // devices averaged per differential side
  double p_stuck_on = 0;
  double p_stuck_off = 0;
  bool defect_correction = false;

  /// When false only the pilot phase is simulated; latency and energy are
  /// still those of the full frame.
  bool simulate_data = true;
  std::uint64_t seed = 1;

  int effective_cp() const { return cp_len < 0 ? n_c / 8 : cp_len; }
  int data_symbols() const { return symbols - pilots; }
  /// Payload bits of the data symbols.
  long long data_bits() const;
  /// Bits counted by the throughput figure: every symbol, pilots included.
  long long frame_bits() const;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  bool operator==(const FrameConfig&) const = default;
};

/// Crossbar operators that outlive a frame: the receiver DFT and, when the
/// transmitter is crossbar-hosted, the IDFT. Built once per configuration.
struct StaticOperators {
  std::optional<ofdm::BuiltDft> dft;
  std::optional<ofdm::BuiltDft> idft;
};

StaticOperators prepare_operators(const FrameConfig& cfg, Rng& rng);

struct FrameResult {
  modem::Metrics metrics;
  double latency_program = 0;  // s
  double latency_data = 0;     // s
  double energy_program = 0;   // J
  double energy_data = 0;      // J
  double throughput = 0;       // b/s
  double energy_efficiency = 0;  // b/J
  long long frame_bits = 0;
  long long failed_detections = 0;
  ProgramReport program_report;  // detector banks
  std::optional<DigitalCost> digital;  // digital backend only

  double latency() const { return latency_program + latency_data; }
  double energy() const { return energy_program + energy_data; }

  modem::Bits rx_bits;  // filled when requested
  ComplexMatrix detected;  // (data_symbols * n_c) x n_t, when requested
};

struct FrameIo {
  const StaticOperators* operators = nullptr;  // built on the fly when null
  const modem::Bits* payload = nullptr;        // leading data bits; rest random
  bool keep_bits = false;
  bool keep_symbols = false;
};

FrameResult run_frame(const FrameConfig& cfg, Rng& rng, const FrameIo& io = {});

enum class SweepVariable : std::uint8_t { snr, antennas };

struct SweepRow {
  double value = 0;  // SNR in dB or antenna count
  int trial = 0;
  FrameResult result;
};

/// One frame per (value, trial), seeded from cfg.seed. Antenna sweeps set
/// n_t = n_r = pilots = value. Rows are ordered by (value, trial)
/// independent of `jobs`.
std::vector<SweepRow> sweep(const FrameConfig& cfg, SweepVariable variable, const std::vector<double>& values,
                            int trials, int jobs = 1);

struct SweepSummary {
  double value = 0;
  int trials = 0;
  double mer_db = 0;  // pooled over trials
  double ber = 0;     // pooled
  double latency_mean = 0;
  double latency_ci95 = 0;
  double energy_mean = 0;
  double energy_ci95 = 0;
};

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows);

struct ImageResult {
  GrayImage recovered;
  modem::Metrics metrics;  // over the pixel bits only
  int frames = 0;
};

/// Sends the pixel bytes (most significant bit first) through as many frames
/// as needed. Each frame is shortened to the data symbols the remaining
/// payload needs; padding bits are random and discarded.
ImageResult transmit_image(const GrayImage& image, const FrameConfig& cfg, Rng& rng,
                           const StaticOperators* operators = nullptr);

/// Digital-baseline workload equivalent to one frame.
DigitalWorkload digital_workload(const FrameConfig& cfg);

}  // namespace rrambb
