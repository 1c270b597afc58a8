#pragma once

// Linear MIMO detection: a digital L-MMSE/ZF reference and the crossbar
// feedback circuit.
//
// The circuit holds alpha * real_map(H) in two differential array pairs.
// At steady state its output solves
//     (G_R^T G_L + g1 g2 I) v = G_R^T i,   i = alpha * real_map(y),
// which is the L-MMSE estimate when g1 g2 = alpha^2 / SNR and zero forcing
// when the second feedback stage is open (g2 = 0). The circuit is evaluated
// by a direct solve; one detection costs one read pulse.

#include <cstdint>
#include <optional>
#include <string>

#include "rrambb/crossbar.hpp"

namespace rrambb::mimo {

enum class DetectorMode : std::uint8_t { lmmse, zf };
const char* to_string(DetectorMode mode);
DetectorMode detector_mode_from_string(const std::string& s);

/// (H^H H + I / SNR)^-1 H^H y, or (H^H H)^-1 H^H y for zero forcing.
/// L-MMSE at infinite SNR is zero forcing. Throws RankError when H does not
/// have full column rank and no regularizer applies.
ComplexVector detect_digital(const ComplexMatrix& h_hat, const ComplexVector& y, double snr_db,
                             DetectorMode mode);

struct DetectorBank {
  int n_t = 0;
  int n_r = 0;
  CrossbarArray left;   // 2 n_r x 2 n_t
  CrossbarArray right;  // same targets, independent programming noise
  ConductanceTargets targets;
  double alpha = 0;  // S per unit channel value
  double g1 = 0;     // S
  double g2 = 0;     // S, zero for zero forcing
  DetectorMode mode = DetectorMode::lmmse;
};

struct BuiltBank {
  DetectorBank bank;
  ProgramReport report;  // left and right pairs programmed in parallel
  ProgramReport left_report;
  ProgramReport right_report;
};

/// Programs both pairs from alpha * real_map(h_hat), alpha set by the
/// three-sigma rule on `sigma_value` (per real component of H). For L-MMSE
/// g1 = g2 = alpha / sqrt(SNR); at infinite SNR the bank degenerates to zero
/// forcing with g1 = alpha.
BuiltBank build_detector_bank(const ComplexMatrix& h_hat, double snr_db, DetectorMode mode,
                              const DeviceModel& model, const ProgramOptions& options, int copies,
                              Rng& rng, double sigma_value = 0.7071067811865476);

/// One detection with fresh read noise on both pairs. Throws RankError if
/// the feedback system is singular.
ComplexVector detect_crossbar(const DetectorBank& bank, const ComplexVector& y, Rng& rng);

/// Same as detect_crossbar with the singular case reported as nullopt.
std::optional<ComplexVector> try_detect_crossbar(const DetectorBank& bank, const ComplexVector& y, Rng& rng);

/// Steady state of the circuit for given decoded matrices (siemens).
RealVector circuit_solve(const RealMatrix& g_left, const RealMatrix& g_right, double g1g2,
                         const RealVector& currents);

}  // namespace rrambb::mimo
