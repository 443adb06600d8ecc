#include "lapack.hpp"

#include <lapacke.h>

namespace oqs::detail {

GeneralEigen general_eigen(ComplexMatrix m, bool vectors) {
  const auto n = static_cast<lapack_int>(m.rows());
  GeneralEigen out;
  out.values.resize(n);
  if (vectors) out.vectors.resize(n, n);
  out.info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n,
                           reinterpret_cast<lapack_complex_double*>(m.data()), n,
                           reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, 1,
                           vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : nullptr,
                           vectors ? n : 1);
  return out;
}

SymmetricEigen symmetric_eigen(RealMatrix m, bool vectors) {
  const auto n = static_cast<lapack_int>(m.rows());
  SymmetricEigen out;
  out.values.resize(n);
  out.info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, m.data(), n, out.values.data());
  if (vectors) out.vectors = std::move(m);
  return out;
}

}  // namespace oqs::detail
