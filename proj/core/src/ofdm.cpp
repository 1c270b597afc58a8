#include "rrambb/ofdm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "rrambb/linmap.hpp"

namespace rrambb::ofdm {

namespace {

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

ComplexMatrix dft_matrix(int n_c, Direction direction) {
  if (n_c < 1) throw DimensionError("dft_matrix: n_c must be positive");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_c));
  const double sign = direction == Direction::forward ? -1.0 : 1.0;
  ComplexMatrix w(n_c, n_c);
  for (int j = 0; j < n_c; ++j) {
    for (int k = 0; k < n_c; ++k) {
      const long m = (static_cast<long>(j) * k) % n_c;
      w(j, k) = std::polar(scale, sign * 2.0 * std::numbers::pi * static_cast<double>(m) / n_c);
    }
  }
  return w;
}

ComplexVector exact_dft(const ComplexVector& x, Direction direction) {
  if (x.size() == 0) throw DimensionError("exact_dft: empty input");
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  ComplexVector y;
  if (direction == Direction::forward) fft.fwd(y, x);
  else fft.inv(y, x);
  return y / std::sqrt(static_cast<double>(x.size()));
}

ComplexMatrix exact_dft_batch(const ComplexMatrix& x, Direction direction) {
  if (x.rows() == 0) throw DimensionError("exact_dft_batch: empty input");
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.rows()));
  ComplexMatrix y(x.rows(), x.cols());
  ComplexVector in(x.rows()), out(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    in = x.col(j);
    if (direction == Direction::forward) fft.fwd(out, in);
    else fft.inv(out, in);
    y.col(j) = out * scale;
  }
  return y;
}

BuiltDft build_dft_operator(int n_c, Direction direction, const DeviceModel& model,
                            const ProgramOptions& options, Rng& rng, int copies) {
  if (n_c < 2 || !power_of_two(n_c)) {
    throw DimensionError("build_dft_operator: n_c must be a power of two >= 2, got " + std::to_string(n_c));
  }
  RealMatrix values = linmap::real_map_matrix(dft_matrix(n_c, Direction::forward));
  if (direction == Direction::inverse) values.transposeInPlace();
  // Largest entry 1/sqrt(n_c) maps to the full range.
  const double sigma_value = 1.0 / (3.0 * std::sqrt(static_cast<double>(n_c)));
  ConductanceTargets targets = encode_targets(values, model, sigma_value);
  CrossbarArray array(2 * n_c, 2 * n_c, model, copies);
  ProgramReport report = program(array, targets, options, rng);
  return {DftOperator{n_c, direction, std::move(array), std::move(targets), {}, false}, std::move(report)};
}

void inject_defects(DftOperator& op, double p_stuck_on, double p_stuck_off, Rng& rng) {
  DefectMap more = rrambb::inject_defects(op.array, p_stuck_on, p_stuck_off, rng);
  op.defects.entries.insert(op.defects.entries.end(), more.entries.begin(), more.entries.end());
}

ComplexVector dft_apply(const DftOperator& op, const ComplexVector& x, Rng& rng) {
  if (x.size() != op.n_c) {
    throw DimensionError("dft_apply: expected " + std::to_string(op.n_c) + " samples, got " +
                         std::to_string(x.size()));
  }
  const RealVector v = linmap::real_map_vector(x);
  RealVector out = mvm_read(op.array, v, rng);
  if (op.correct_defects && !op.defects.empty()) {
    out = defection_correct(out, op.defects, op.array, op.targets, v);
  }
  return linmap::unmap_vector(out / op.alpha());
}

ComplexMatrix dft_apply_batch(const DftOperator& op, const ComplexMatrix& x, Rng& rng) {
  if (x.rows() != op.n_c) throw DimensionError("dft_apply_batch: row count must equal n_c");
  const Eigen::Index n = op.n_c;
  RealMatrix v(2 * n, x.cols());
  v.topRows(n) = x.real();
  v.bottomRows(n) = x.imag();
  RealMatrix out = mvm_read_batch(op.array, v, rng);
  if (op.correct_defects && !op.defects.empty()) {
    out += defection_matrix(op.defects, op.array, op.targets) * v;
  }
  out /= op.alpha();
  ComplexMatrix y(n, x.cols());
  y.real() = out.topRows(n);
  y.imag() = out.bottomRows(n);
  return y;
}

ComplexVector cyclic_prefix(const ComplexVector& x, int cp_len, CpMode mode) {
  const auto n = static_cast<int>(x.size());
  if (mode == CpMode::add) {
    if (cp_len < 0 || cp_len >= n) {
      throw InputError("cyclic_prefix: cp_len " + std::to_string(cp_len) + " outside [0, " +
                       std::to_string(n) + ")");
    }
    ComplexVector y(n + cp_len);
    y.head(cp_len) = x.tail(cp_len);
    y.tail(n) = x;
    return y;
  }
  if (cp_len < 0 || 2 * cp_len >= n) {
    throw InputError("cyclic_prefix: cp_len " + std::to_string(cp_len) + " too long to remove from " +
                     std::to_string(n) + " samples");
  }
  return x.tail(n - cp_len);
}

}  // namespace rrambb::ofdm
