#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ringlab/seeded_stream.hpp"
#include "ringlab/types.hpp"

namespace ringlab::jordan {

/// `beta` Jordan blocks of size `p` sharing one eigenvalue.
struct BlockClass {
  int p = 0;
  int beta = 0;
};

/// One eigenvalue theta with its block classes, sizes strictly decreasing.
struct Group {
  Complex theta;
  std::vector<BlockClass> blocks;

  /// Total column span: sum of beta * p.
  int dimension() const;
};

inline constexpr int kDefaultMaxRank = 64;

/// Jordan data of the perturbation.  Validates distinct eigenvalues,
/// strictly decreasing block sizes per group, and the rank bound (which
/// must stay independent of the ambient dimension n).
class JordanSpec {
 public:
  explicit JordanSpec(std::vector<Group> groups, int max_rank = kDefaultMaxRank);

  std::span<const Group> groups() const { return groups_; }
  int group_count() const { return static_cast<int>(groups_.size()); }
  const Group& group(int i) const { return groups_[static_cast<std::size_t>(i)]; }
  int r() const { return r_; }

 private:
  std::vector<Group> groups_;
  int r_ = 0;
};

/// Invertible basis for the Jordan form; rejects matrices whose SVD-based
/// reciprocal condition estimate falls below 1e-12.
class BasisSpec {
 public:
  explicit BasisSpec(ComplexMatrix q, double rcond_floor = 1e-12);
  static BasisSpec identity(int r);

  const ComplexMatrix& q() const { return q_; }
  const ComplexMatrix& q_inverse() const { return q_inv_; }
  int r() const { return static_cast<int>(q_.rows()); }

 private:
  ComplexMatrix q_;
  ComplexMatrix q_inv_;
};

/// Column index sets into {0, ..., r-1} for one eigenvalue group.
/// `first_cols`/`last_cols` are I(theta)/J(theta); per block class j,
/// `k[j]` and `l[j]` restrict the last/first columns to the class-j blocks
/// and `k_minus[j]`/`l_minus[j]` to all classes before j.
struct GroupIndexing {
  std::vector<int> first_cols;  // I(theta)
  std::vector<int> last_cols;   // J(theta)
  std::vector<std::vector<int>> k;        // K(i,j)   subset of J(theta)
  std::vector<std::vector<int>> k_minus;  // K(i,j)^-
  std::vector<std::vector<int>> l;        // L(i,j)   subset of I(theta)
  std::vector<std::vector<int>> l_minus;  // L(i,j)^-
};

struct JordanIndexing {
  std::vector<GroupIndexing> groups;
};

/// Block-diagonal J with R_p(theta) blocks: theta on the diagonal, ones on
/// the superdiagonal; groups in spec order, sizes descending within each.
ComplexMatrix build_jcf(const JordanSpec& spec);

JordanIndexing indexing(const JordanSpec& spec);

/// The embedded perturbation: P = B C with C B = J.  J is the assembled
/// Jordan form (not a numerical product), and the r x r products
/// B* B = J* Q* Q J and C C* = Q^-1 (Q^-1)* hold independently of n.
struct PerturbationRealization {
  ComplexMatrix p;  // n x n
  ComplexMatrix b;  // n x r
  ComplexMatrix c;  // r x n
  ComplexMatrix j;  // r x r
};

/// Embeds Po = Q J Q^-1 into dimension n via an n x r Haar frame W:
/// B = W Q J, C = Q^-1 W*.  The null stream selects W = (I_r; 0) for
/// deterministic fixtures.  `bulk_block` optionally appends a square block
/// (spectrum expected inside the bulk) for robustness experiments; it is
/// embedded with basis I alongside Q.
PerturbationRealization embed_perturbation(const JordanSpec& spec, const BasisSpec& q, int n,
                                           SeededStream rng,
                                           const std::optional<ComplexMatrix>& bulk_block = {});

}  // namespace ringlab::jordan
