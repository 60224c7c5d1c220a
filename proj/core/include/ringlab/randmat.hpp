#pragma once

#include <iosfwd>
#include <span>

#include "ringlab/seeded_stream.hpp"
#include "ringlab/types.hpp"

namespace ringlab::randmat {

/// Assembly of the isotropic model: U diag(s), or U diag(s) V with
/// independent U, V.
enum class Form { UT, UTV };

/// Haar-distributed n x n unitary: QR of a standard complex Gaussian
/// matrix with the R-diagonal phase correction applied column-wise, so the
/// result does not depend on the QR sign convention.
ComplexMatrix sample_haar_unitary(int n, SeededStream rng);

/// First r columns of a Haar unitary (an isometric n x r frame).
ComplexMatrix haar_frame(int n, int r, SeededStream rng);

/// Entries i.i.d. circular complex Gaussian with variance 1/n.
ComplexMatrix sample_ginibre(int n, SeededStream rng);

/// U diag(t_values) for Form::UT, U diag(t_values) V for Form::UTV.
/// Either way the singular values are exactly `t_values`.
ComplexMatrix assemble_isotropic(std::span<const double> t_values, SeededStream rng,
                                 Form form = Form::UT);

/// Debug CSV: one row per matrix row, re/im interleaved.
void write_matrix_csv(std::ostream& out, const ComplexMatrix& m);
ComplexMatrix read_matrix_csv(std::istream& in);

}  // namespace ringlab::randmat
