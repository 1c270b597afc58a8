#pragma once

// Complex-to-real mappings that let a real-valued crossbar carry complex
// baseband arithmetic.
//
//   real_map_matrix(A) = [ Re(A)  -Im(A) ]      real_map_vector(x) = [ Re(x) ]
//                        [ Im(A)   Re(A) ]                           [ Im(x) ]
//
// The matrix map is a ring homomorphism, so products, sums, adjoints and
// inverses commute with it, and real_map_matrix(A) * real_map_vector(x)
// equals real_map_vector(A * x).

#include "rrambb/types.hpp"

namespace rrambb::linmap {

RealMatrix real_map_matrix(const ComplexMatrix& a);

RealVector real_map_vector(const ComplexVector& x);

/// Inverse of real_map_vector. Throws DimensionError on odd length.
ComplexVector unmap_vector(const RealVector& r);

/// Inverse of real_map_matrix, reading only the left block column.
/// Throws DimensionError unless both dimensions are even.
ComplexMatrix unmap_matrix(const RealMatrix& r);

}  // namespace rrambb::linmap
