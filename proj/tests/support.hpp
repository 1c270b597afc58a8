#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rrambb/rng.hpp"
#include "rrambb/types.hpp"

namespace rrambb::test {

inline ComplexMatrix random_complex(int rows, int cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {rng.normal(), rng.normal()};
  return m;
}

inline ComplexVector random_vector(int n, Rng& rng) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v[i] = {rng.normal(), rng.normal()};
  return v;
}

template <typename A, typename B>
double rel_err(const A& got, const B& want) {
  const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

struct Moments {
  double mean = 0;
  double var = 0;
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(xs.size() - 1);
  return m;
}

/// One-sample Kolmogorov-Smirnov statistic against `cdf`.
template <typename Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace rrambb::test
