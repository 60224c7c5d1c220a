#pragma once

#include <vector>

#include "ringlab/types.hpp"

// Thin internal wrappers around the LAPACKE routines the library leans on.
// Column-major throughout; Eigen's default storage matches.

namespace ringlab::detail {

/// Pins the BLAS to one thread when OpenBLAS is present; trial-level
/// parallelism owns the cores instead.
void use_single_threaded_blas();

struct EigValuesResult {
  std::vector<Complex> values;  // on info > 0: only indices >= info converged
  int info = 0;
};

/// Eigenvalues of a general complex matrix (zgeev, no vectors).
/// Consumes its argument.
EigValuesResult eig_values(ComplexMatrix m);

/// LU factorization with partial pivoting (zgetrf) plus condition
/// estimation and repeated solves.
class LuFactors {
 public:
  explicit LuFactors(ComplexMatrix m);

  bool singular() const { return info_ > 0; }

  /// Reciprocal 1-norm condition estimate (zgecon); 0 when singular.
  double rcond() const;

  /// Solves A x = rhs in place (zgetrs).  Requires !singular().
  void solve_in_place(ComplexMatrix& rhs) const;

  Complex determinant() const;

 private:
  ComplexMatrix lu_;
  std::vector<int> ipiv_;
  double anorm_ = 0;
  int info_ = 0;
};

/// QR of a full-column-rank m x k matrix; replaces `g` with the isometric
/// Q factor and stores the R diagonal (zgeqrf + zungqr).
void qr_isometry_in_place(ComplexMatrix& g, std::vector<Complex>& r_diag);

}  // namespace ringlab::detail
