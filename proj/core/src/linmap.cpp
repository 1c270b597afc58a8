#include "rrambb/linmap.hpp"

namespace rrambb::linmap {

RealMatrix real_map_matrix(const ComplexMatrix& a) {
  const Eigen::Index k = a.rows();
  const Eigen::Index l = a.cols();
  RealMatrix r(2 * k, 2 * l);
  r.topLeftCorner(k, l) = a.real();
  r.topRightCorner(k, l) = -a.imag();
  r.bottomLeftCorner(k, l) = a.imag();
  r.bottomRightCorner(k, l) = a.real();
  return r;
}

RealVector real_map_vector(const ComplexVector& x) {
  const Eigen::Index k = x.size();
  RealVector r(2 * k);
  r.head(k) = x.real();
  r.tail(k) = x.imag();
  return r;
}

ComplexVector unmap_vector(const RealVector& r) {
  if (r.size() % 2 != 0) {
    throw DimensionError("unmap_vector: length " + std::to_string(r.size()) + " is odd");
  }
  const Eigen::Index k = r.size() / 2;
  ComplexVector x(k);
  for (Eigen::Index i = 0; i < k; ++i) x[i] = Complex(r[i], r[k + i]);
  return x;
}

ComplexMatrix unmap_matrix(const RealMatrix& r) {
  if (r.rows() % 2 != 0 || r.cols() % 2 != 0) {
    throw DimensionError("unmap_matrix: dimensions must be even");
  }
  const Eigen::Index k = r.rows() / 2;
  const Eigen::Index l = r.cols() / 2;
  ComplexMatrix a(k, l);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < l; ++j) a(i, j) = Complex(r(i, j), r(k + i, j));
  return a;
}

}  // namespace rrambb::linmap
