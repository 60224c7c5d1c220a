#include "lapack_support.hpp"

#include <mutex>
#include <stdexcept>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <complex>
#include <lapacke.h>

// Resolves when the linked BLAS is OpenBLAS; otherwise stays null.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace ringlab::detail {

void use_single_threaded_blas() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  });
}

EigValuesResult eig_values(ComplexMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_values: matrix must be square");
  use_single_threaded_blas();
  const auto n = static_cast<lapack_int>(m.rows());
  EigValuesResult result;
  result.values.resize(static_cast<std::size_t>(n));
  if (n == 0) return result;
  result.info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, m.data(), n,
                              result.values.data(), nullptr, 1, nullptr, 1);
  if (result.info < 0) throw std::runtime_error("zgeev: bad argument");
  return result;
}

LuFactors::LuFactors(ComplexMatrix m) : lu_(std::move(m)) {
  if (lu_.rows() != lu_.cols()) throw std::invalid_argument("LuFactors: matrix must be square");
  use_single_threaded_blas();
  const auto n = static_cast<lapack_int>(lu_.rows());
  ipiv_.resize(static_cast<std::size_t>(n));
  anorm_ = lu_.cwiseAbs().colwise().sum().maxCoeff();
  info_ = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, ipiv_.data());
  if (info_ < 0) throw std::runtime_error("zgetrf: bad argument");
}

double LuFactors::rcond() const {
  if (singular()) return 0.0;
  const auto n = static_cast<lapack_int>(lu_.rows());
  double rcond = 0.0;
  const int info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, lu_.data(), n, anorm_, &rcond);
  if (info != 0) throw std::runtime_error("zgecon: failed");
  return rcond;
}

void LuFactors::solve_in_place(ComplexMatrix& rhs) const {
  if (singular()) throw std::runtime_error("LuFactors: singular matrix");
  if (rhs.rows() != lu_.rows()) throw std::invalid_argument("LuFactors: rhs row mismatch");
  const auto n = static_cast<lapack_int>(lu_.rows());
  const auto nrhs = static_cast<lapack_int>(rhs.cols());
  if (nrhs == 0) return;
  const int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, nrhs, lu_.data(), n,
                                  ipiv_.data(), rhs.data(), n);
  if (info != 0) throw std::runtime_error("zgetrs: failed");
}

Complex LuFactors::determinant() const {
  Complex det{1.0, 0.0};
  for (Eigen::Index i = 0; i < lu_.rows(); ++i) {
    det *= lu_(i, i);
    if (ipiv_[static_cast<std::size_t>(i)] != static_cast<int>(i) + 1) det = -det;
  }
  return det;
}

void qr_isometry_in_place(ComplexMatrix& g, std::vector<Complex>& r_diag) {
  use_single_threaded_blas();
  const auto m = static_cast<lapack_int>(g.rows());
  const auto k = static_cast<lapack_int>(g.cols());
  if (k > m) throw std::invalid_argument("qr_isometry: more columns than rows");
  std::vector<Complex> tau(static_cast<std::size_t>(k));
  int info = LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, k, g.data(), m, tau.data());
  if (info != 0) throw std::runtime_error("zgeqrf: failed");
  r_diag.resize(static_cast<std::size_t>(k));
  for (lapack_int j = 0; j < k; ++j) r_diag[static_cast<std::size_t>(j)] = g(j, j);
  info = LAPACKE_zungqr(LAPACK_COL_MAJOR, m, k, k, g.data(), m, tau.data());
  if (info != 0) throw std::runtime_error("zungqr: failed");
}

}  // namespace ringlab::detail
