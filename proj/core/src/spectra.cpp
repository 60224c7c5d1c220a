#include "ringlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "lapack_support.hpp"

namespace ringlab::spectra {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

constexpr double kRcondFloor = 1e-14;

}  // namespace

SpectrumResult eigenvalues(const ComplexMatrix& m) {
  require(m.rows() == m.cols(), "eigenvalues: matrix must be square");
  require(m.allFinite(), "eigenvalues: entries must be finite");
  const auto n = m.rows();

  auto eig = detail::eig_values(m);
  if (eig.info > 0) {
    std::vector<Complex> partial(eig.values.begin() + eig.info, eig.values.end());
    throw EigensolveError("eigenvalues: QR iteration did not converge", std::move(partial));
  }

  SpectrumResult result;
  result.eigenvalues = std::move(eig.values);
  const Complex sum = std::accumulate(result.eigenvalues.begin(), result.eigenvalues.end(),
                                      Complex{0.0, 0.0});
  result.residuals.trace_abs_error = std::abs(sum - m.trace());
  result.residuals.trace_scale = static_cast<double>(n) * std::max(1.0, max_abs(m));
  if (n <= 30 && n > 0) {
    const Complex det = detail::LuFactors(m).determinant();
    Complex prod{1.0, 0.0};
    for (const Complex& v : result.eigenvalues) prod *= v;
    result.residuals.det_rel_error =
        std::abs(prod - det) / std::max(std::abs(det), std::numeric_limits<double>::min());
  }
  return result;
}

void check_residuals(const SpectrumResult& result) {
  if (result.residuals.trace_abs_error > 1e-8 * result.residuals.trace_scale)
    throw std::runtime_error("SpectrumResult: trace consistency violated");
  if (result.residuals.det_rel_error && *result.residuals.det_rel_error > 1e-6)
    throw std::runtime_error("SpectrumResult: determinant consistency violated");
}

namespace {

// Shared by f and f': factors (zI - A) once, returns X = (zI-A)^-1 B.
detail::LuFactors shifted_factors(Complex z, const ComplexMatrix& a) {
  ComplexMatrix shifted = -a;
  shifted.diagonal().array() += z;
  detail::LuFactors lu(std::move(shifted));
  if (lu.singular()) throw NearSingularError("characteristic_ratio: z is an eigenvalue of A");
  if (lu.rcond() < kRcondFloor)
    throw NearSingularError("characteristic_ratio: zI - A numerically singular");
  return lu;
}

}  // namespace

Complex characteristic_ratio(Complex z, const ComplexMatrix& a, const ComplexMatrix& b,
                             const ComplexMatrix& c) {
  require(a.rows() == a.cols(), "characteristic_ratio: A must be square");
  require(b.rows() == a.rows() && c.cols() == a.rows() && b.cols() == c.rows(),
          "characteristic_ratio: B, C shapes must match A and each other");
  const auto r = b.cols();
  if (r == 0) return Complex{1.0, 0.0};

  auto lu = shifted_factors(z, a);
  ComplexMatrix x = b;
  lu.solve_in_place(x);  // (zI - A)^-1 B, r solves
  const ComplexMatrix small = ComplexMatrix::Identity(r, r) - c * x;
  return small.determinant();
}

Complex newton_polish(Complex z, const ComplexMatrix& a, const ComplexMatrix& b,
                      const ComplexMatrix& c, int steps) {
  const auto r = b.cols();
  if (r == 0) return z;
  for (int step = 0; step < steps; ++step) {
    auto lu = shifted_factors(z, a);
    ComplexMatrix x = b;
    lu.solve_in_place(x);
    ComplexMatrix x2 = x;
    lu.solve_in_place(x2);  // (zI - A)^-2 B
    const ComplexMatrix m = ComplexMatrix::Identity(r, r) - c * x;
    const Complex f = m.determinant();
    // f'(z) = f(z) tr(M^-1 C (zI-A)^-2 B)
    const ComplexMatrix m_inv_cx2 = m.partialPivLu().solve(c * x2);
    const Complex fprime = f * m_inv_cx2.trace();
    if (fprime == Complex{0.0, 0.0}) break;
    z -= f / fprime;
  }
  return z;
}

RingClassification classify_outliers(std::span<const Complex> spectrum,
                                     const profiles::RingGeometry& ring, double epsilon,
                                     double delta) {
  require(epsilon > 0.0, "classify_outliers: epsilon must be positive");
  if (ring.a > 0.0)
    require(delta > 0.0 && delta < ring.a, "classify_outliers: need 0 < delta < a");
  RingClassification out;
  const double outer_radius = ring.b + 2.0 * epsilon;
  const double inner_radius = ring.a > 0.0 ? ring.a - delta : -1.0;
  for (const Complex& z : spectrum) {
    const double mod = std::abs(z);
    if (mod > outer_radius)
      out.outer.push_back(z);
    else if (mod < inner_radius)
      out.inner_violations.push_back(z);
    else
      out.bulk.push_back(z);
  }
  return out;
}

double default_epsilon(const jordan::JordanSpec& spec, const profiles::RingGeometry& ring) {
  double eps = 0.1 * ring.b;
  for (const auto& group : spec.groups()) {
    const double excess = std::abs(group.theta) - ring.b;
    if (excess > 0.0) eps = std::min(eps, excess / 4.0);
  }
  return eps;
}

double default_delta(const profiles::RingGeometry& ring) { return 0.1 * ring.a; }

int OutlierReport::matched_count() const {
  int count = 0;
  for (const auto& group : groups) {
    for (const auto& cls : group.classes) count += static_cast<int>(cls.raw.size());
    count += static_cast<int>(group.extras.size());
  }
  return count;
}

bool OutlierReport::any_mismatch() const {
  return std::any_of(groups.begin(), groups.end(),
                     [](const GroupReport& g) { return g.count_mismatch; });
}

OutlierReport match_outliers(std::span<const Complex> outer, const jordan::JordanSpec& spec,
                             long n, std::optional<double> min_spike_modulus) {
  require(n >= 1, "match_outliers: n must be positive");
  OutlierReport report;
  report.n = n;

  std::vector<std::vector<Complex>> clusters(static_cast<std::size_t>(spec.group_count()));
  for (const Complex& lambda : outer) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.group_count(); ++i) {
      const double dist = std::abs(lambda - spec.group(i).theta);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best >= 0)
      clusters[static_cast<std::size_t>(best)].push_back(lambda);
    else
      report.unmatched.push_back(lambda);
  }

  for (int i = 0; i < spec.group_count(); ++i) {
    const auto& group = spec.group(i);
    auto& cluster = clusters[static_cast<std::size_t>(i)];
    GroupReport gr;
    gr.theta = group.theta;
    const bool spiked = !min_spike_modulus || std::abs(group.theta) > *min_spike_modulus;
    gr.expected_count = spiked ? group.dimension() : 0;
    gr.count_mismatch = static_cast<int>(cluster.size()) != gr.expected_count;

    // Rate classes separate as n grows: the largest block size moves
    // slowest, so the farthest points belong to class 1.
    std::sort(cluster.begin(), cluster.end(), [&](const Complex& x, const Complex& y) {
      return std::abs(x - group.theta) > std::abs(y - group.theta);
    });

    std::size_t cursor = 0;
    for (std::size_t j = 0; j < group.blocks.size(); ++j) {
      const auto& cls = group.blocks[j];
      RateClassReport rc;
      rc.rate_class = static_cast<int>(j) + 1;
      rc.p = cls.p;
      rc.beta = cls.beta;
      const double rate = std::pow(static_cast<double>(n), 1.0 / (2.0 * cls.p));
      const auto want = static_cast<std::size_t>(cls.p) * static_cast<std::size_t>(cls.beta);
      for (std::size_t t = 0; t < want && cursor < cluster.size(); ++t, ++cursor) {
        rc.raw.push_back(cluster[cursor]);
        rc.rescaled.push_back(rate * (cluster[cursor] - group.theta));
      }
      gr.classes.push_back(std::move(rc));
    }
    for (; cursor < cluster.size(); ++cursor) gr.extras.push_back(cluster[cursor]);
    report.groups.push_back(std::move(gr));
  }
  return report;
}

void write_outlier_csv_header(std::ostream& out, bool with_trial_column) {
  if (with_trial_column) out << "trial,";
  out << "group_index,theta_re,theta_im,rate_class,p,lambda_re,lambda_im,rescaled_re,rescaled_im\n";
}

void write_outlier_csv_rows(std::ostream& out, const OutlierReport& report,
                            std::optional<long> trial_index) {
  out.precision(17);
  for (std::size_t i = 0; i < report.groups.size(); ++i) {
    const auto& group = report.groups[i];
    for (const auto& cls : group.classes) {
      for (std::size_t t = 0; t < cls.raw.size(); ++t) {
        if (trial_index) out << *trial_index << ',';
        out << i << ',' << group.theta.real() << ',' << group.theta.imag() << ','
            << cls.rate_class << ',' << cls.p << ',' << cls.raw[t].real() << ','
            << cls.raw[t].imag() << ',' << cls.rescaled[t].real() << ','
            << cls.rescaled[t].imag() << '\n';
      }
    }
  }
}

}  // namespace ringlab::spectra
