#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ringlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Largest entry modulus, 0 for empty matrices.
inline double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace ringlab
