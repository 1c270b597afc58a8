#include "rrambb/channel.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "rrambb/csv.hpp"

namespace rrambb::channel {

ComplexMatrix sample_matrix(int n_t, int n_r, Rng& rng) {
  if (n_t < 1 || n_r < 1) throw DimensionError("sample_matrix: dimensions must be positive");
  ComplexMatrix h(n_r, n_t);
  for (int r = 0; r < n_r; ++r) {
    for (int c = 0; c < n_t; ++c) {
      const double re = rng.normal() * kRayleighComponentStd;
      const double im = rng.normal() * kRayleighComponentStd;
      h(r, c) = Complex(re, im);
    }
  }
  return h;
}

ChannelRealization sample_channel(int n_t, int n_r, int n_c, bool flat, Rng& rng) {
  if (n_c < 1) throw DimensionError("sample_channel: n_c must be positive");
  ChannelRealization out;
  out.flat = flat;
  out.per_subcarrier.reserve(static_cast<std::size_t>(n_c));
  if (flat) {
    out.per_subcarrier.assign(static_cast<std::size_t>(n_c), sample_matrix(n_t, n_r, rng));
  } else {
    for (int k = 0; k < n_c; ++k) out.per_subcarrier.push_back(sample_matrix(n_t, n_r, rng));
  }
  return out;
}

double noise_variance(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  if (std::isnan(snr_db)) throw InputError("snr_db is NaN");
  return std::pow(10.0, -snr_db / 10.0);
}

void add_noise(ComplexVector& y, double noise_var, Rng& rng) {
  if (noise_var <= 0) return;
  const double s = std::sqrt(noise_var / 2.0);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double re = rng.normal() * s;
    const double im = rng.normal() * s;
    y[i] += Complex(re, im);
  }
}

ComplexVector apply_channel(const ComplexMatrix& h, const ComplexVector& x, double snr_db, Rng& rng) {
  if (h.cols() != x.size()) {
    throw DimensionError("apply_channel: H has " + std::to_string(h.cols()) + " columns, x has " +
                         std::to_string(x.size()) + " entries");
  }
  ComplexVector y = h * x;
  add_noise(y, noise_variance(snr_db), rng);
  return y;
}

ComplexMatrix unitary_pilot(int n_t) {
  if (n_t < 1) throw DimensionError("unitary_pilot: n_t must be positive");
  ComplexMatrix p(n_t, n_t);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
  for (int a = 0; a < n_t; ++a) {
    for (int b = 0; b < n_t; ++b) {
      // Reduce the exponent first so large indices keep full precision.
      const long m = (static_cast<long>(a) * b) % n_t;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(m) / n_t;
      p(a, b) = std::polar(scale, phase);
    }
  }
  return p;
}

ComplexMatrix estimate_channel(const ComplexMatrix& s, const ComplexMatrix& p) {
  if (p.rows() != p.cols()) throw DimensionError("estimate_channel: pilot matrix must be square");
  if (s.cols() != p.rows()) throw DimensionError("estimate_channel: S and P disagree on the pilot length");
  return s * p.adjoint();
}

void write_channel_csv(const ChannelRealization& h, std::ostream& out) {
  CsvWriter csv(out, {"subcarrier", "row", "col", "re", "im"});
  for (int k = 0; k < h.n_c(); ++k) {
    const ComplexMatrix& m = h.at(k);
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) csv.row(k, r, c, m(r, c).real(), m(r, c).imag());
    }
  }
}

ChannelRealization read_channel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "subcarrier,row,col,re,im") {
    throw InputError("channel csv: missing or unexpected header");
  }
  struct Entry {
    int k, r, c;
    Complex v;
  };
  std::vector<Entry> entries;
  int n_c = 0, n_r = 0, n_t = 0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw InputError("channel csv line " + std::to_string(line_no) + ": expected 5 fields");
    try {
      Entry e{std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2]), Complex(std::stod(f[3]), std::stod(f[4]))};
      if (e.k < 0 || e.r < 0 || e.c < 0) throw InputError("negative index");
      n_c = std::max(n_c, e.k + 1);
      n_r = std::max(n_r, e.r + 1);
      n_t = std::max(n_t, e.c + 1);
      entries.push_back(e);
    } catch (const std::exception& ex) {
      throw InputError("channel csv line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (entries.empty()) throw InputError("channel csv: no entries");
  if (entries.size() != static_cast<std::size_t>(n_c) * n_r * n_t) {
    throw InputError("channel csv: entry count does not match the index ranges");
  }
  ChannelRealization h;
  h.per_subcarrier.assign(static_cast<std::size_t>(n_c), ComplexMatrix::Zero(n_r, n_t));
  for (const auto& e : entries) h.per_subcarrier[static_cast<std::size_t>(e.k)](e.r, e.c) = e.v;
  h.flat = true;
  for (int k = 1; k < n_c && h.flat; ++k) h.flat = h.at(k) == h.at(0);
  return h;
}

}  // namespace rrambb::channel
