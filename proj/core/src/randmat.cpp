#include "ringlab/randmat.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lapack_support.hpp"

namespace ringlab::randmat {
namespace {

ComplexMatrix gaussian_matrix(int rows, int cols, RandomStream& stream) {
  ComplexMatrix g(rows, cols);
  // Column-major fill so draw order matches memory order.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = stream.gaussian_complex();
  return g;
}

// QR with the Mezzadri phase fix: scale column j by (r_jj/|r_jj|)^-1.
// A vanishing R pivot has probability zero; resample if it happens.
ComplexMatrix haar_isometry(int n, int r, SeededStream rng) {
  if (n < 1 || r < 1 || r > n) throw std::invalid_argument("haar_frame: need 1 <= r <= n");
  for (std::uint64_t attempt = 0;; ++attempt) {
    RandomStream stream(attempt == 0 ? rng : rng.substream(~attempt));
    ComplexMatrix q = gaussian_matrix(n, r, stream);
    std::vector<Complex> r_diag;
    detail::qr_isometry_in_place(q, r_diag);
    bool degenerate = false;
    for (int j = 0; j < r; ++j) {
      const double mag = std::abs(r_diag[static_cast<std::size_t>(j)]);
      if (mag < 1e-290) {
        degenerate = true;
        break;
      }
      q.col(j) *= std::conj(r_diag[static_cast<std::size_t>(j)]) / mag;
    }
    if (!degenerate) return q;
  }
}

}  // namespace

ComplexMatrix sample_haar_unitary(int n, SeededStream rng) {
  return haar_isometry(n, n, rng);
}

ComplexMatrix haar_frame(int n, int r, SeededStream rng) {
  return haar_isometry(n, r, rng);
}

ComplexMatrix sample_ginibre(int n, SeededStream rng) {
  if (n < 1) throw std::invalid_argument("sample_ginibre: n must be positive");
  RandomStream stream(rng);
  ComplexMatrix g = gaussian_matrix(n, n, stream);
  g *= 1.0 / std::sqrt(static_cast<double>(n));
  return g;
}

ComplexMatrix assemble_isotropic(std::span<const double> t_values, SeededStream rng, Form form) {
  if (t_values.empty()) throw std::invalid_argument("assemble_isotropic: empty singular values");
  const int n = static_cast<int>(t_values.size());
  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(t_values.data(), n);
  ComplexMatrix a = sample_haar_unitary(n, rng.substream(0));
  a = a * s.asDiagonal();
  if (form == Form::UTV) a = a * sample_haar_unitary(n, rng.substream(1));
  return a;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m) {
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j).real() << ',' << m(i, j).imag();
    }
    out << '\n';
  }
}

ComplexMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> fields;
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(std::stod(field));
    if (fields.size() % 2 != 0)
      throw std::invalid_argument("read_matrix_csv: odd field count, expected re/im pairs");
    std::vector<Complex> row;
    for (std::size_t j = 0; j + 1 < fields.size(); j += 2)
      row.emplace_back(fields[j], fields[j + 1]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return ComplexMatrix(0, 0);
  const auto cols = rows.front().size();
  for (const auto& row : rows)
    if (row.size() != cols) throw std::invalid_argument("read_matrix_csv: ragged rows");
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

}  // namespace ringlab::randmat
