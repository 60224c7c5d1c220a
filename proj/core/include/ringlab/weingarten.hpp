#pragma once

#include <gmpxx.h>

#include <map>
#include <span>
#include <vector>

#include "ringlab/types.hpp"

namespace ringlab::weingarten {

using Rational = mpq_class;

/// Permutation of {0, ..., k-1}, stored as its image list.
class Perm {
 public:
  /// Throws std::invalid_argument unless `images` is a bijection.
  explicit Perm(std::vector<int> images);

  static Perm identity(int k);
  static Perm transposition(int k, int a, int b);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }

  Perm inverse() const;

  /// Composition (this o other): x -> this(other(x)).
  Perm after(const Perm& other) const;

  /// Cycle lengths sorted descending; the class label used for Wg lookups.
  std::vector<int> cycle_type() const;

  int cycle_count() const;

  /// Minimal number of transpositions: k - #cycles.
  int transposition_length() const { return size() - cycle_count(); }

  const std::vector<int>& images() const { return images_; }

 private:
  std::vector<int> images_;
};

/// All Weingarten values of order k at dimension n, keyed by cycle type.
/// Exact: the values solve sum_tau n^{#cycles(sigma^-1 tau)} Wg(tau) =
/// [sigma == id] over the rationals.
struct WeingartenTable {
  int k = 0;
  long n = 0;
  std::map<std::vector<int>, Rational> values;

  const Rational& at(const std::vector<int>& cycle_type) const;
};

inline constexpr int kMaxOrder = 7;  // factorial-growth guard

/// Builds the order-k table by exact rational inversion of the
/// class-reduced Gram system.  Requires n >= k (invertibility) and
/// k <= kMaxOrder.
WeingartenTable build_table(int k, long n);

/// Cached, thread-safe table access.
const WeingartenTable& table(int k, long n);

Rational weingarten(const Perm& sigma, long n);

/// E[u_{r1 c1} ... u_{rk ck} conj(u_{r1' c1'}) ... conj(u_{rk' ck'})] for a
/// Haar unitary of dimension n, exactly.  Returns 0 when the row or column
/// index multisets do not match.
Rational unitary_moment(std::span<const int> rows, std::span<const int> cols,
                        std::span<const int> rows_conj, std::span<const int> cols_conj,
                        long n);

/// E Tr(A V B V* C V D V*) over Haar V, from the closed form in eight
/// traces.  n = 1 degenerates to Tr(ABCD) since V cancels.
Complex four_trace_expectation(const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexMatrix& c, const ComplexMatrix& d, long n);

}  // namespace ringlab::weingarten
