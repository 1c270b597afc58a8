#pragma once

// Crossbar-hosted DFT/IDFT and cyclic prefix.
//
// The unitary DFT matrix W (entries exp(-2 pi i jk / n) / sqrt(n)) is real
// mapped and stored in one differential crossbar, so a whole transform is a
// single analog read. The inverse stores the transpose of the real-mapped
// matrix, which is the real map of W^H = W^-1.

#include <cstdint>

#include "rrambb/crossbar.hpp"

namespace rrambb::ofdm {

enum class Direction : std::uint8_t { forward, inverse };

struct DftOperator {
  int n_c = 0;
  Direction direction = Direction::forward;
  CrossbarArray array;
  ConductanceTargets targets;  // kept for defect compensation
  DefectMap defects;
  bool correct_defects = false;

  double alpha() const { return targets.alpha; }
};

struct BuiltDft {
  DftOperator op;
  ProgramReport report;
};

/// Exact unitary DFT (forward) or its inverse as a dense complex matrix.
ComplexMatrix dft_matrix(int n_c, Direction direction = Direction::forward);

/// Exact unitary transforms (FFT); used by transmitters and as the digital
/// baseline.
ComplexVector exact_dft(const ComplexVector& x, Direction direction = Direction::forward);
/// Column-wise exact_dft.
ComplexMatrix exact_dft_batch(const ComplexMatrix& x, Direction direction = Direction::forward);

/// Programs the 2n_c x 2n_c operator. n_c must be a power of two >= 2.
BuiltDft build_dft_operator(int n_c, Direction direction, const DeviceModel& model,
                            const ProgramOptions& options, Rng& rng, int copies = 1);

/// Marks stuck cells in the operator's array and records them.
void inject_defects(DftOperator& op, double p_stuck_on, double p_stuck_off, Rng& rng);

/// One analog transform; charges exactly one read.
ComplexVector dft_apply(const DftOperator& op, const ComplexVector& x, Rng& rng);

/// Transforms every column of `x` (n_c x m); one read per column.
ComplexMatrix dft_apply_batch(const DftOperator& op, const ComplexMatrix& x, Rng& rng);

enum class CpMode : std::uint8_t { add, remove };

/// `add` prepends the last cp_len samples, `remove` drops the first cp_len.
ComplexVector cyclic_prefix(const ComplexVector& x, int cp_len, CpMode mode);

}  // namespace rrambb::ofdm
