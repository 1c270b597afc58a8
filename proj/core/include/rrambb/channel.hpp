#pragma once

// i.i.d. Rayleigh MIMO channels, AWGN and pilot-based LS estimation.
//
// SNR is per stream: unit symbol energy over the noise variance, with
// unit-power channel entries, so sigma_n^2 = 1 / SNR.

#include <iosfwd>
#include <vector>

#include "rrambb/rng.hpp"
#include "rrambb/types.hpp"

namespace rrambb::channel {

/// Std of the real and of the imaginary part of a CN(0, 1) entry.
inline const double kRayleighComponentStd = 0.7071067811865476;

struct ChannelRealization {
  std::vector<ComplexMatrix> per_subcarrier;  // n_r x n_t each
  bool flat = true;
  double sigma_h = kRayleighComponentStd;

  int n_r() const { return static_cast<int>(per_subcarrier.front().rows()); }
  int n_t() const { return static_cast<int>(per_subcarrier.front().cols()); }
  int n_c() const { return static_cast<int>(per_subcarrier.size()); }
  const ComplexMatrix& at(int k) const { return per_subcarrier[static_cast<std::size_t>(k)]; }
};

/// One n_r x n_t matrix of CN(0, 1) entries.
ComplexMatrix sample_matrix(int n_t, int n_r, Rng& rng);

ChannelRealization sample_channel(int n_t, int n_r, int n_c, bool flat, Rng& rng);

/// 1 / linear(snr_db); zero at +inf.
double noise_variance(double snr_db);

/// Adds CN(0, sigma^2) to every entry in place.
void add_noise(ComplexVector& y, double noise_var, Rng& rng);

/// y = H x + z.
ComplexVector apply_channel(const ComplexMatrix& h, const ComplexVector& x, double snr_db, Rng& rng);

/// Normalized n_t-point DFT matrix.
ComplexMatrix unitary_pilot(int n_t);

/// Least-squares estimate S P^H for a unitary pilot P.
ComplexMatrix estimate_channel(const ComplexMatrix& s, const ComplexMatrix& p);

/// CSV with columns subcarrier,row,col,re,im.
void write_channel_csv(const ChannelRealization& h, std::ostream& out);
/// Inverse of write_channel_csv; a single sub-carrier reads back as flat.
ChannelRealization read_channel_csv(std::istream& in);

}  // namespace rrambb::channel
