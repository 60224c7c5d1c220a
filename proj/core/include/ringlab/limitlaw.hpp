#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "ringlab/jordan.hpp"
#include "ringlab/seeded_stream.hpp"
#include "ringlab/types.hpp"

namespace ringlab::limitlaw {

/// A Schur pivot block came out numerically singular; the event has
/// probability zero, so the sampler redraws.
class ResampleRequired : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat index (group, k, l) with k in J(theta_i) (last columns) and l in
/// I(theta_i) (first columns).
struct CovarianceIndex {
  int group = 0;
  int k = 0;
  int l = 0;
};

/// Hermitian covariance of the limit Gaussian vector m:
///   Gamma[(i,k,l),(i',k',l')] =
///     b^2 / (theta_i conj(theta_i') - b^2)
///       * e_k^* Q^-1 (Q^-1)^* e_k'  *  e_l'^* Q^* Q e_l,
/// pseudo-covariance identically zero.  Requires |theta_i| > b for all
/// groups.  The pivoted Cholesky factor is computed once and shared.
struct LimitCovariance {
  double b = 0;
  std::vector<CovarianceIndex> index;
  ComplexMatrix gamma;
  ComplexMatrix cholesky;  // L with L L^* ~ Gamma (jittered, possibly low rank)

  int dimension() const { return static_cast<int>(index.size()); }
  /// Position of (group, k, l) in the flat order; throws if absent.
  int position(int group, int k, int l) const;
};

LimitCovariance covariance_matrix(const jordan::JordanSpec& spec, const jordan::BasisSpec& q,
                                  double b);

/// One circular complex Gaussian draw with covariance Gamma: m = L g.
ComplexVector sample_m_vector(const LimitCovariance& cov, SeededStream rng);

/// The beta x beta fluctuation matrix of group i, rate class j (1-based):
/// M = theta (M_IV - M_III M_I^-1 M_II), blocks indexed by the K/L sets.
/// M_I is solved against, never inverted; a singular M_I raises
/// ResampleRequired.
ComplexMatrix build_M(const LimitCovariance& cov, const ComplexVector& m,
                      const jordan::JordanIndexing& idx, int group, int rate_class,
                      Complex theta);

struct ClassConstellation {
  int rate_class = 0;  // j, 1-based
  int p = 0;
  int beta = 0;
  ComplexMatrix m_matrix;
  /// beta * p points, eigenvalue-major, principal p-th root first; the p
  /// roots of one eigenvalue form a regular p-gon centered at 0.
  std::vector<Complex> points;
};

struct GroupConstellation {
  Complex theta;
  std::vector<ClassConstellation> classes;
};

struct LimitConstellation {
  std::vector<GroupConstellation> groups;
};

/// One joint draw: a single shared m vector feeds every M^theta_j, so
/// cross-group and cross-class correlations are preserved.
LimitConstellation sample_constellation(const jordan::JordanSpec& spec,
                                        const jordan::BasisSpec& q, double b, SeededStream rng);

/// Specialized sampler for the uncorrelated (Kronecker-delta Gram) case:
/// class 1 is a scaled Ginibre matrix, later classes the Ginibre Schur
/// complement; groups are independent.  Equivalent in law to
/// sample_constellation under the hypothesis.
class GinibreCaseLaw {
 public:
  GinibreCaseLaw(jordan::JordanSpec spec, double b);

  LimitConstellation sample(SeededStream rng) const;

  /// theta b / sqrt(|theta|^2 - b^2), the class-1 Ginibre scale of group i.
  Complex scale(int group) const;

  const jordan::JordanSpec& spec() const { return spec_; }
  double b() const { return b_; }

 private:
  jordan::JordanSpec spec_;
  double b_;
};

/// Checks the Gram-product Kronecker pattern to 1e-10 and returns the
/// specialized sampler; throws std::runtime_error pointing the caller at
/// sample_constellation when the hypothesis fails.
GinibreCaseLaw ginibre_case_law(const jordan::JordanSpec& spec, const jordan::BasisSpec& q,
                                double b);

/// b^2 / (|theta|^2 (|theta|^2 - b^2)); requires |theta| > b.
double single_block_variance(Complex theta, double b);

struct PairwiseCovariance {
  double sigma2 = 0;        // E|Z|^2
  double sigma2_prime = 0;  // E|Z'|^2
  Complex cross;            // E[Z conj(Z')]; E[Z Z'] = 0
};

/// Closed forms for two groups i != i' whose leading rate class has
/// multiplicity one, from Q's Gram products.
PairwiseCovariance pairwise_outlier_covariance(const jordan::JordanSpec& spec,
                                               const jordan::BasisSpec& q, double b, int group_a,
                                               int group_b);

/// Same CSV schema as the outlier report; the lambda columns carry theta
/// (the n -> infinity raw position) so empirical and limit clouds line up
/// on the rescaled columns.
void write_constellation_csv(std::ostream& out, const LimitConstellation& constellation);
void write_constellation_csv_rows(std::ostream& out, const LimitConstellation& constellation);

}  // namespace ringlab::limitlaw
