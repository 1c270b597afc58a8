#include "rrambb/modem.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace rrambb::modem {

namespace {

const double kScale = 1.0 / std::sqrt(10.0);

// Gray label -> amplitude level; level order -3, -1, +1, +3 carries labels 00, 01, 11, 10.
constexpr std::array<double, 4> kLevelOfGray = {-3.0, -1.0, 3.0, 1.0};

std::uint32_t decide_axis(double x) {
  std::uint32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::uint32_t g = 0; g < 4; ++g) {
    const double d = std::abs(x - kLevelOfGray[g] * kScale);
    if (d < best_d) {  // strict: equal distance keeps the smaller label
      best_d = d;
      best = g;
    }
  }
  return best;
}

}  // namespace

Bits bin_to_gray(const Bits& word) {
  Bits g(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) g[i] = i == 0 ? word[0] : (word[i - 1] ^ word[i]);
  return g;
}

Bits gray_to_bin(const Bits& word) {
  Bits b(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) b[i] = i == 0 ? word[0] : (b[i - 1] ^ word[i]);
  return b;
}

std::uint32_t bin_to_gray(std::uint32_t value) { return value ^ (value >> 1); }

std::uint32_t gray_to_bin(std::uint32_t value) {
  std::uint32_t b = value;
  for (std::uint32_t shift = 1; shift < 32; shift <<= 1) b ^= b >> shift;
  return b;
}

ComplexVector qam16_modulate(const Bits& bits) {
  if (bits.size() % kBitsPerSymbol != 0) {
    throw DimensionError("qam16_modulate: bit count " + std::to_string(bits.size()) +
                         " is not a multiple of 4");
  }
  ComplexVector s(static_cast<Eigen::Index>(bits.size() / kBitsPerSymbol));
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const std::uint8_t* b = &bits[static_cast<std::size_t>(k) * kBitsPerSymbol];
    const std::uint32_t gi = (b[0] & 1u) << 1 | (b[1] & 1u);
    const std::uint32_t gq = (b[2] & 1u) << 1 | (b[3] & 1u);
    s[k] = Complex(kLevelOfGray[gi], kLevelOfGray[gq]) * kScale;
  }
  return s;
}

Bits qam16_demodulate(const ComplexVector& symbols) {
  Bits bits(static_cast<std::size_t>(symbols.size()) * kBitsPerSymbol);
  for (Eigen::Index k = 0; k < symbols.size(); ++k) {
    const std::uint32_t gi = decide_axis(symbols[k].real());
    const std::uint32_t gq = decide_axis(symbols[k].imag());
    std::uint8_t* b = &bits[static_cast<std::size_t>(k) * kBitsPerSymbol];
    b[0] = static_cast<std::uint8_t>(gi >> 1);
    b[1] = static_cast<std::uint8_t>(gi & 1u);
    b[2] = static_cast<std::uint8_t>(gq >> 1);
    b[3] = static_cast<std::uint8_t>(gq & 1u);
  }
  return bits;
}

double mer_from_energies(double signal_energy, double error_energy) {
  if (error_energy == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal_energy / error_energy);
}

Metrics compute_metrics(const ComplexVector& tx_symbols, const ComplexVector& rx_symbols,
                        const Bits& tx_bits, const Bits& rx_bits) {
  if (tx_symbols.size() != rx_symbols.size()) throw DimensionError("compute_metrics: symbol count mismatch");
  if (tx_bits.size() != rx_bits.size()) throw DimensionError("compute_metrics: bit count mismatch");
  Metrics m;
  m.signal_energy = tx_symbols.squaredNorm();
  m.error_energy = (rx_symbols - tx_symbols).squaredNorm();
  m.mer_db = mer_from_energies(m.signal_energy, m.error_energy);
  m.bits = static_cast<long long>(tx_bits.size());
  for (std::size_t i = 0; i < tx_bits.size(); ++i) m.bit_errors += (tx_bits[i] != rx_bits[i]);
  m.ber = m.bits == 0 ? 0.0 : static_cast<double>(m.bit_errors) / static_cast<double>(m.bits);
  return m;
}

Metrics merge_metrics(const Metrics& a, const Metrics& b) {
  Metrics m;
  m.signal_energy = a.signal_energy + b.signal_energy;
  m.error_energy = a.error_energy + b.error_energy;
  m.mer_db = mer_from_energies(m.signal_energy, m.error_energy);
  m.bits = a.bits + b.bits;
  m.bit_errors = a.bit_errors + b.bit_errors;
  m.ber = m.bits == 0 ? 0.0 : static_cast<double>(m.bit_errors) / static_cast<double>(m.bits);
  return m;
}

}  // namespace rrambb::modem
