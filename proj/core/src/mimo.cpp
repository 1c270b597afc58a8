#include "rrambb/mimo.hpp"

#include <cmath>

#include "rrambb/channel.hpp"
#include "rrambb/linmap.hpp"

namespace rrambb::mimo {

namespace {

// Relative reciprocal condition below which a system is treated as singular.
constexpr double kSingularRcond = 1e-13;

}  // namespace

const char* to_string(DetectorMode mode) { return mode == DetectorMode::zf ? "zf" : "lmmse"; }

DetectorMode detector_mode_from_string(const std::string& s) {
  if (s == "lmmse" || s == "mmse") return DetectorMode::lmmse;
  if (s == "zf") return DetectorMode::zf;
  throw ConfigError("detector", "expected lmmse or zf, got '" + s + "'");
}

ComplexVector detect_digital(const ComplexMatrix& h_hat, const ComplexVector& y, double snr_db,
                             DetectorMode mode) {
  if (h_hat.rows() != y.size()) throw DimensionError("detect_digital: H rows != length of y");
  const double reg = mode == DetectorMode::lmmse ? channel::noise_variance(snr_db) : 0.0;
  if (reg > 0) {
    ComplexMatrix a = h_hat.adjoint() * h_hat;
    a.diagonal().array() += reg;
    return a.llt().solve(h_hat.adjoint() * y);
  }
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(h_hat);
  if (qr.rank() < h_hat.cols()) throw RankError("detect_digital: channel is rank deficient");
  return qr.solve(y);
}

BuiltBank build_detector_bank(const ComplexMatrix& h_hat, double snr_db, DetectorMode mode,
                              const DeviceModel& model, const ProgramOptions& options, int copies,
                              Rng& rng, double sigma_value) {
  if (!h_hat.allFinite()) throw InputError("build_detector_bank: channel estimate is not finite");
  const double noise = channel::noise_variance(snr_db);
  const RealMatrix values = linmap::real_map_matrix(h_hat);
  ConductanceTargets targets = encode_targets(values, model, sigma_value);
  const auto rows = static_cast<int>(values.rows());
  const auto cols = static_cast<int>(values.cols());

  DetectorBank bank{static_cast<int>(h_hat.cols()),
                    static_cast<int>(h_hat.rows()),
                    CrossbarArray(rows, cols, model, copies),
                    CrossbarArray(rows, cols, model, copies),
                    targets,
                    targets.alpha,
                    0,
                    0,
                    mode};
  if (mode == DetectorMode::lmmse && noise > 0) {
    bank.g1 = bank.g2 = bank.alpha * std::sqrt(noise);
  } else {
    bank.g1 = noise > 0 ? bank.alpha * std::sqrt(noise) : bank.alpha;
    bank.g2 = 0;
  }

  ProgramReport left = program(bank.left, targets, options, rng);
  ProgramReport right = program(bank.right, targets, options, rng);
  ProgramReport report = left;
  report.append_parallel(right);
  return {std::move(bank), std::move(report), std::move(left), std::move(right)};
}

RealVector circuit_solve(const RealMatrix& g_left, const RealMatrix& g_right, double g1g2,
                         const RealVector& currents) {
  RealMatrix a = g_right.transpose() * g_left;
  a.diagonal().array() += g1g2;
  Eigen::PartialPivLU<RealMatrix> lu(a);
  if (!(lu.rcond() > kSingularRcond)) throw RankError("detect_crossbar: feedback system is singular");
  return lu.solve(g_right.transpose() * currents);
}

ComplexVector detect_crossbar(const DetectorBank& bank, const ComplexVector& y, Rng& rng) {
  if (y.size() != bank.n_r) throw DimensionError("detect_crossbar: y length != n_r");
  const RealMatrix gl = read_decoded(bank.left, rng);
  const RealMatrix gr = read_decoded(bank.right, rng);
  const RealVector i = bank.alpha * linmap::real_map_vector(y);
  return linmap::unmap_vector(circuit_solve(gl, gr, bank.g1 * bank.g2, i));
}

std::optional<ComplexVector> try_detect_crossbar(const DetectorBank& bank, const ComplexVector& y, Rng& rng) {
  try {
    return detect_crossbar(bank, y, rng);
  } catch (const RankError&) {
    return std::nullopt;
  }
}

}  // namespace rrambb::mimo
