#pragma once
// Thin LAPACK wrappers for the dense eigenproblems on the hot paths.

#include "oqs/heff.hpp"

namespace oqs::detail {

struct GeneralEigen {
  ComplexVector values;
  ComplexMatrix vectors;  // right eigenvectors, empty unless requested
  int info = 0;
};

/// zgeev on a copy of m.
GeneralEigen general_eigen(ComplexMatrix m, bool vectors);

struct SymmetricEigen {
  RealVector values;  // ascending
  RealMatrix vectors;
  int info = 0;
};

/// dsyevd on a copy of m (lower triangle).
SymmetricEigen symmetric_eigen(RealMatrix m, bool vectors);

}  // namespace oqs::detail
