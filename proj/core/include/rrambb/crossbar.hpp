#pragma once

// Differential-pair crossbar arrays.
//
// A signed real value is stored as G+ - G- across two physical arrays; with
// `copies` = k devices per side the decoded value is the mean over the k
// copies. Programming follows the reset-then-tune procedure: every cell is
// fully reset, then only the side that carries the value's sign is tuned,
// either with a precomputed pulse count (no verification) or with a
// write/read loop that stops inside a tolerance window.
//
// Latency bookkeeping: cells of one row are pulsed in parallel, rows are
// sequential. Energy is Ohmic, V^2 * G * dt per pulse.

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rrambb/device.hpp"
#include "rrambb/rng.hpp"
#include "rrambb/types.hpp"

namespace rrambb {

enum class Scheme : std::uint8_t { without_verification, with_verification };
enum class Side : std::uint8_t { plus, minus };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& s);

struct ConductanceTargets {
  RealMatrix plus;   // S
  RealMatrix minus;  // S
  double alpha = 0;  // S per unit value
};

/// Maps values to differential targets with alpha = range / (3 * sigma_value).
/// Values beyond 3 * sigma_value saturate at the full range.
ConductanceTargets encode_targets(const RealMatrix& values, const DeviceModel& model, double sigma_value);

/// (plus - minus) / alpha.
RealMatrix decode_targets(const ConductanceTargets& targets);

struct ProgramOptions {
  Scheme scheme = Scheme::with_verification;
  double tolerance = 0;     // S; half a conductance step when left at 0
  long max_pulses = 0;      // per cell; 50 * N_p when left at 0
  /// Verified writes only: stop at the first read that reaches the target.
  bool stop_on_crossing = false;
  /// Ideal programming: every healthy cell lands exactly on its target and
  /// no pulses are charged.
  bool exact = false;

  ProgramOptions resolved(const DeviceModel& model) const;
};

struct UnreachedCell {
  int row;
  int col;
  int copy;
  Side side;
  double residual;  // achieved - target, S
};

struct ProgramReport {
  double latency = 0;        // s, reset + write + read pulses
  double write_latency = 0;  // s, write pulses only
  double energy = 0;         // J
  long long write_pulses = 0;
  long long read_pulses = 0;
  long long reset_pulses = 0;
  std::vector<UnreachedCell> unreached_cells;

  /// Two programming phases one after the other.
  void append_sequential(const ProgramReport& other);
  /// Two arrays programmed at the same time.
  void append_parallel(const ProgramReport& other);
};

enum class PulseKind : std::uint8_t { reset, write, read };

struct PulseEvent {
  PulseKind kind;
  Side side;
  double target;       // S
  double voltage;      // V
  double conductance;  // S after the pulse (measured value for reads)
  double duration;     // s
  double energy;       // J
};

using TraceSink = std::function<void(const PulseEvent&)>;

struct CellTuneResult {
  long writes = 0;
  long reads = 0;
  /// Write pulses applied before a read first landed at or beyond the target, -1 if never.
  long first_crossing = -1;
  bool reached = false;
  double energy = 0;
};

/// Tunes one cell toward `target` starting from its current state.
CellTuneResult tune_cell(CellState& cell, double target, const ProgramOptions& options,
                         const DeviceModel& model, Rng& rng, Side side = Side::plus,
                         const TraceSink* trace = nullptr);

class CrossbarArray {
 public:
  CrossbarArray(int rows, int cols, DeviceModel model, int copies = 1);
  CrossbarArray(const CrossbarArray& other);
  CrossbarArray& operator=(const CrossbarArray& other);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int copies() const { return copies_; }
  const DeviceModel& model() const { return model_; }

  CellState& cell(Side side, int row, int col, int copy = 0);
  const CellState& cell(Side side, int row, int col, int copy = 0) const;

  /// Re-derives cached quantities after cells were modified directly.
  void commit();

  /// Noiseless mean over copies of effective (G+ - G-), in siemens.
  const RealMatrix& decoded() const { return decoded_; }
  /// Sum of effective conductance over every physical cell.
  double conductance_sum() const { return conductance_sum_; }

  /// Charges one read invocation to the array ledger.
  void charge_read() const;
  long long read_invocations() const { return reads_.load(); }
  double read_latency() const { return static_cast<double>(read_invocations()) * model_.read_time(); }
  double read_energy() const { return read_energy_.load(); }
  void reset_read_ledger();

 private:
  std::size_t index(int row, int col, int copy) const {
    return (static_cast<std::size_t>(row) * cols_ + col) * copies_ + copy;
  }

  int rows_;
  int cols_;
  int copies_;
  DeviceModel model_;
  std::vector<CellState> plus_;
  std::vector<CellState> minus_;
  RealMatrix decoded_;
  double conductance_sum_ = 0;
  mutable std::atomic<long long> reads_{0};
  mutable std::atomic<double> read_energy_{0};
};

ProgramReport program(CrossbarArray& array, const ConductanceTargets& targets,
                      const ProgramOptions& options, Rng& rng);

/// One analog MVM: decoded * volts plus read noise. Per-cell read noise is
/// independent Gaussian, so each output carries variance
/// 2 * sigma_read^2 / k * sum(volts^2), which is sampled directly.
RealVector mvm_read(const CrossbarArray& array, const RealVector& volts, Rng& rng);

/// Column-wise mvm_read; each column of `volts` is a separate read invocation.
RealMatrix mvm_read_batch(const CrossbarArray& array, const RealMatrix& volts, Rng& rng);

/// Decoded matrix as seen by one read: every cell read once with fresh noise.
RealMatrix read_decoded(const CrossbarArray& array, Rng& rng);

struct DefectEntry {
  Side side;
  int row;
  int col;
  int copy;
  Defect defect;
};

struct DefectMap {
  std::vector<DefectEntry> entries;
  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

DefectMap inject_defects(CrossbarArray& array, double p_stuck_on, double p_stuck_off, Rng& rng);

/// Compensatory matrix of the stuck cells: what the array should have
/// contributed minus what the pinned cells contribute, per decoded entry.
RealMatrix defection_matrix(const DefectMap& defects, const CrossbarArray& array,
                            const ConductanceTargets& targets);

RealVector defection_correct(const RealVector& raw_output, const DefectMap& defects,
                             const CrossbarArray& array, const ConductanceTargets& targets,
                             const RealVector& volts);

/// Pulse-by-pulse programming of one differential pair to `value` (encoded
/// with the three-sigma rule on `sigma_value`): full reset of both cells,
/// then tuning of G+ and G- in that order.
std::vector<PulseEvent> trace_pair_programming(const DeviceModel& model, double value, double sigma_value,
                                               const ProgramOptions& options, Rng& rng);

/// CSV snapshot: row,col,copy,g_plus,g_minus,defect_plus,defect_minus.
void write_snapshot_csv(const CrossbarArray& array, std::ostream& out);

}  // namespace rrambb
