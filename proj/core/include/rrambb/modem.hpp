#pragma once

// Bit/symbol boundary: Gray coding, Gray-labelled 16-QAM and the MER/BER
// figures of merit.
//
// 16-QAM convention: a 4-bit word [i1 i0 q1 q0] (first bit first) puts the
// Gray pair (i1 i0) on the in-phase axis and (q1 q0) on the quadrature axis.
// Each axis maps Gray 00, 01, 11, 10 to -3, -1, +1, +3, scaled by 1/sqrt(10)
// for unit average symbol energy.

#include <cstdint>
#include <vector>

#include "rrambb/types.hpp"

namespace rrambb::modem {

using Bits = std::vector<std::uint8_t>;

/// Word conversion, most significant bit first:
/// gray[0] = bin[0], gray[i] = bin[i-1] xor bin[i].
Bits bin_to_gray(const Bits& word);
Bits gray_to_bin(const Bits& word);

std::uint32_t bin_to_gray(std::uint32_t value);
std::uint32_t gray_to_bin(std::uint32_t value);

inline constexpr int kBitsPerSymbol = 4;

/// Throws DimensionError unless bits.size() is a multiple of 4.
ComplexVector qam16_modulate(const Bits& bits);

/// Hard decision, nearest point; ties go to the smaller Gray label per axis.
Bits qam16_demodulate(const ComplexVector& symbols);

struct Metrics {
  double mer_db = 0;  // +inf when the error energy is exactly zero
  double ber = 0;
  long long bit_errors = 0;
  long long bits = 0;
  double signal_energy = 0;
  double error_energy = 0;
};

Metrics compute_metrics(const ComplexVector& tx_symbols, const ComplexVector& rx_symbols,
                        const Bits& tx_bits, const Bits& rx_bits);

/// Pools symbol energies and bit counts of several runs (ratio of sums).
Metrics merge_metrics(const Metrics& a, const Metrics& b);

double mer_from_energies(double signal_energy, double error_energy);

}  // namespace rrambb::modem
