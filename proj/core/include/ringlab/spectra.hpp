#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ringlab/jordan.hpp"
#include "ringlab/profiles.hpp"
#include "ringlab/types.hpp"

namespace ringlab::spectra {

/// QR iteration gave up; carries whatever part of the spectrum converged.
class EigensolveError : public std::runtime_error {
 public:
  EigensolveError(std::string what, std::vector<Complex> partial)
      : std::runtime_error(std::move(what)), partial_spectrum(std::move(partial)) {}
  std::vector<Complex> partial_spectrum;
};

/// (zI - A) was singular or numerically unusable at the requested point.
class NearSingularError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResidualMetrics {
  double trace_abs_error = 0;   // |sum lambda - tr M|
  double trace_scale = 0;       // n * max(1, max|M_ij|)
  std::optional<double> det_rel_error;  // filled for n <= 30
};

struct SpectrumResult {
  std::vector<Complex> eigenvalues;
  ResidualMetrics residuals;
};

/// Full spectrum of a dense complex matrix.  Throws EigensolveError on
/// QR non-convergence.
SpectrumResult eigenvalues(const ComplexMatrix& m);

/// Throws std::runtime_error unless the trace (and, for n <= 30,
/// determinant) consistency bounds hold.
void check_residuals(const SpectrumResult& result);

/// f(z) = det(I_r - C (zI - A)^-1 B) = det(zI - A - BC) / det(zI - A),
/// computed with r linear solves; the n x n inverse is never formed.
/// Throws NearSingularError when z sits on (or numerically at) the
/// spectrum of A.
Complex characteristic_ratio(Complex z, const ComplexMatrix& a, const ComplexMatrix& b,
                             const ComplexMatrix& c);

/// Newton steps z <- z - f(z)/f'(z) with the analytic derivative;
/// sharpens an eigenvalue of A + BC that is not an eigenvalue of A.
Complex newton_polish(Complex z, const ComplexMatrix& a, const ComplexMatrix& b,
                      const ComplexMatrix& c, int steps = 1);

struct RingClassification {
  std::vector<Complex> outer;             // |z| > b + 2 eps
  std::vector<Complex> inner_violations;  // |z| < a - delta (expected empty)
  std::vector<Complex> bulk;
};

RingClassification classify_outliers(std::span<const Complex> spectrum,
                                     const profiles::RingGeometry& ring, double epsilon,
                                     double delta);

/// eps = min(0.1 b, min over spiked theta of (|theta| - b)/4); falls back
/// to 0.1 b when no eigenvalue clears the outer radius.
double default_epsilon(const jordan::JordanSpec& spec, const profiles::RingGeometry& ring);

/// delta = 0.1 a (unused when a = 0).
double default_delta(const profiles::RingGeometry& ring);

/// One rate class (i, j): the matched raw eigenvalues and their
/// n^{1/(2p)}-rescaled deviations from theta.
struct RateClassReport {
  int rate_class = 0;  // j, 1-based as in the block ordering
  int p = 0;
  int beta = 0;
  std::vector<Complex> raw;
  std::vector<Complex> rescaled;
};

struct GroupReport {
  Complex theta;
  int expected_count = 0;
  bool count_mismatch = false;
  std::vector<RateClassReport> classes;
  std::vector<Complex> extras;  // matched beyond the expected count
};

struct OutlierReport {
  long n = 0;
  std::vector<GroupReport> groups;
  std::vector<Complex> unmatched;         // outer points with no group to join
  std::vector<Complex> inner_violations;  // carried through from classification

  int matched_count() const;
  int total_outer() const { return matched_count() + static_cast<int>(unmatched.size()); }
  bool any_mismatch() const;
};

/// Assigns each outer eigenvalue to the nearest theta, splits each cluster
/// into rate classes by distance (descending: beta_1 p_1 points to class 1,
/// then beta_2 p_2, ...), and rescales by n^{1/(2 p_j)}.  Groups whose
/// theta modulus is at most `min_spike_modulus` are expected to attract
/// nothing.  Count mismatches are flagged, never fatal.
OutlierReport match_outliers(std::span<const Complex> outer, const jordan::JordanSpec& spec,
                             long n, std::optional<double> min_spike_modulus = {});

/// CSV schema:
/// group_index,theta_re,theta_im,rate_class,p,lambda_re,lambda_im,rescaled_re,rescaled_im
/// with an optional leading `trial` column.
void write_outlier_csv_header(std::ostream& out, bool with_trial_column);
void write_outlier_csv_rows(std::ostream& out, const OutlierReport& report,
                            std::optional<long> trial_index = {});

}  // namespace ringlab::spectra
