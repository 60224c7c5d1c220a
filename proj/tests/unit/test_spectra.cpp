#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "ringlab/jordan.hpp"
#include "ringlab/randmat.hpp"
#include "ringlab/spectra.hpp"

using namespace ringlab;
using jordan::BasisSpec;
using jordan::JordanSpec;

namespace {

bool contains_close(const std::vector<Complex>& values, Complex target, double tol) {
  return std::any_of(values.begin(), values.end(),
                     [&](const Complex& v) { return std::abs(v - target) <= tol; });
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("diagonal matrix spectrum") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = Complex{1, 0};
  m(1, 1) = Complex{0, 2};
  m(2, 2) = Complex{-3, 0};
  const auto result = spectra::eigenvalues(m);
  spectra::check_residuals(result);
  CHECK(contains_close(result.eigenvalues, {1, 0}, 1e-12));
  CHECK(contains_close(result.eigenvalues, {0, 2}, 1e-12));
  CHECK(contains_close(result.eigenvalues, {-3, 0}, 1e-12));
}

TEST_CASE("companion matrix of z^3 - 1 gives the cube roots of unity") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(1, 0) = m(2, 1) = 1.0;
  m(0, 2) = 1.0;
  const auto result = spectra::eigenvalues(m);
  spectra::check_residuals(result);
  const double c = std::cos(2.0 * kPi / 3.0), s = std::sin(2.0 * kPi / 3.0);
  CHECK(contains_close(result.eigenvalues, {1, 0}, 1e-10));
  CHECK(contains_close(result.eigenvalues, {c, s}, 1e-10));
  CHECK(contains_close(result.eigenvalues, {c, -s}, 1e-10));
}

TEST_CASE("Haar unitary spectrum lies on the unit circle") {
  const auto u = randmat::sample_haar_unitary(50, SeededStream{61, 0});
  const auto result = spectra::eigenvalues(u);
  spectra::check_residuals(result);
  for (const auto& value : result.eigenvalues) {
    CHECK(std::abs(value) >= 1.0 - 1e-8);
    CHECK(std::abs(value) <= 1.0 + 1e-8);
  }
}

TEST_CASE("residual metrics populate") {
  const auto g = randmat::sample_ginibre(12, SeededStream{62, 0});
  const auto result = spectra::eigenvalues(g);
  REQUIRE(result.residuals.det_rel_error.has_value());
  spectra::check_residuals(result);
  const auto big = spectra::eigenvalues(randmat::sample_ginibre(40, SeededStream{62, 1}));
  CHECK_FALSE(big.residuals.det_rel_error.has_value());
  spectra::check_residuals(big);
}

TEST_CASE("characteristic ratio is one for a vanishing perturbation") {
  const auto a = randmat::sample_ginibre(6, SeededStream{63, 0});
  const ComplexMatrix b = ComplexMatrix::Zero(6, 2);
  const ComplexMatrix c = ComplexMatrix::Zero(2, 6);
  const auto f = spectra::characteristic_ratio({2.5, 0.5}, a, b, c);
  CHECK(std::abs(f - Complex{1, 0}) < 1e-14);
}

TEST_CASE("characteristic ratio equals the brute-force determinant ratio, rank 1, n = 6") {
  const auto a = randmat::sample_ginibre(6, SeededStream{64, 0});
  RandomStream stream(SeededStream{64, 1});
  ComplexMatrix b(6, 1), c(1, 6);
  for (int i = 0; i < 6; ++i) {
    b(i, 0) = stream.gaussian_complex();
    c(0, i) = stream.gaussian_complex();
  }
  const Complex z{3.0, -1.0};
  const auto fast = spectra::characteristic_ratio(z, a, b, c);
  const auto brute = oracles::brute_force_ratio(z, a, b, c);
  CHECK(std::abs(fast - brute) <= 1e-10 * std::abs(brute));
}

TEST_CASE("property: ratio matches brute force over random low-rank instances") {
  RandomStream stream(SeededStream{65, 0});
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + static_cast<int>(stream.uniform() * 46);  // up to 50
    const int r = 1 + static_cast<int>(stream.uniform() * 4);   // up to 4
    const auto a = randmat::sample_ginibre(n, SeededStream{65, 100 + static_cast<std::uint64_t>(trial)});
    ComplexMatrix b(n, r), c(r, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < r; ++j) {
        b(i, j) = stream.gaussian_complex();
        c(j, i) = stream.gaussian_complex();
      }
    const Complex z{2.2 + 2.0 * stream.uniform(), 2.0 * stream.uniform() - 1.0};
    const auto fast = spectra::characteristic_ratio(z, a, b, c);
    const auto brute = oracles::brute_force_ratio(z, a, b, c);
    REQUIRE(std::abs(fast - brute) <= 1e-9 * std::max(1.0, std::abs(brute)));
  }
}

TEST_CASE("eigenvalues of the perturbed matrix are roots of f") {
  const int n = 24;
  const auto a = randmat::sample_ginibre(n, SeededStream{66, 0});
  const auto spec = JordanSpec({{Complex{3, 1}, {{1, 1}}}});
  const auto embedded = jordan::embed_perturbation(spec, BasisSpec::identity(1), n, SeededStream{66, 1});
  const ComplexMatrix perturbed = a + embedded.p;
  const auto eig = spectra::eigenvalues(perturbed).eigenvalues;
  Complex outlier{0, 0};
  double best = 1e9;
  for (const auto& value : eig)
    if (std::abs(value - Complex{3, 1}) < best) best = std::abs(value - Complex{3, 1}), outlier = value;
  const auto f = spectra::characteristic_ratio(outlier, a, embedded.b, embedded.c);
  CHECK(std::abs(f) <= 1e-8);
  // one Newton step keeps it a root to even tighter tolerance
  const auto polished = spectra::newton_polish(outlier, a, embedded.b, embedded.c, 1);
  CHECK(std::abs(spectra::characteristic_ratio(polished, a, embedded.b, embedded.c)) <= 1e-6);
}

TEST_CASE("characteristic ratio rejects z on the spectrum of A") {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = Complex{1, 0};
  a(1, 1) = Complex{2, 0};
  a(2, 2) = Complex{3, 0};
  ComplexMatrix b = ComplexMatrix::Ones(3, 1), c = ComplexMatrix::Ones(1, 3);
  CHECK_THROWS_AS(spectra::characteristic_ratio({2.0, 0.0}, a, b, c), spectra::NearSingularError);
}

TEST_CASE("classification: outer point, vacuous inner region, bounds checks") {
  const profiles::RingGeometry ring{std::sqrt(2.0), 2.46644};
  const std::vector<Complex> spectrum{{4, 1}, {2, 0}, {1.5, 0.2}};
  const auto classified = spectra::classify_outliers(spectrum, ring, 0.2, 0.1);
  REQUIRE(classified.outer.size() == 1);
  CHECK(classified.outer[0] == Complex{4, 1});
  CHECK(classified.inner_violations.empty());
  CHECK(classified.bulk.size() == 2);

  const profiles::RingGeometry ginibre{0.0, 1.0};
  const auto vac = spectra::classify_outliers(spectrum, ginibre, 0.2, 0.0);
  CHECK(vac.inner_violations.empty());  // a = 0: vacuous by definition

  CHECK_THROWS_AS(spectra::classify_outliers(spectrum, ring, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(spectra::classify_outliers(spectrum, ring, 0.2, 2.0), std::invalid_argument);
}

TEST_CASE("default epsilon and delta") {
  const profiles::RingGeometry ring{std::sqrt(2.0), 2.4664414};
  const JordanSpec fig2({{Complex{1, 0}, {{1, 1}}},
                         {Complex{4, 1}, {{1, 1}}},
                         {Complex{4, -1}, {{1, 1}}}});
  const double eps = spectra::default_epsilon(fig2, ring);
  CHECK(eps == doctest::Approx(0.1 * ring.b));  // the spike margin is larger here
  CHECK(ring.b + 3.0 * eps < std::abs(Complex{4, 1}));
  CHECK(spectra::default_delta(ring) == doctest::Approx(0.1 * ring.a));

  // no spiked eigenvalue: falls back to 0.1 b
  const JordanSpec inside({{Complex{0.5, 0}, {{1, 1}}}});
  CHECK(spectra::default_epsilon(inside, ring) == doctest::Approx(0.1 * ring.b));
}

TEST_CASE("matching: single outlier rescales by sqrt(n)") {
  const JordanSpec spec({{Complex{2, 0}, {{1, 1}}}});
  const std::vector<Complex> outer{{2.1, 0.05}};
  const auto report = spectra::match_outliers(outer, spec, 400);
  REQUIRE(report.groups.size() == 1);
  REQUIRE(report.groups[0].classes.size() == 1);
  REQUIRE(report.groups[0].classes[0].rescaled.size() == 1);
  const Complex expected = 20.0 * Complex{0.1, 0.05};
  CHECK(std::abs(report.groups[0].classes[0].rescaled[0] - expected) < 1e-12);
  CHECK_FALSE(report.any_mismatch());
}

TEST_CASE("matching: rate classes split by distance, counts per class") {
  const JordanSpec spec({{Complex{4, 1}, {{3, 1}, {1, 1}}}});
  // synthetic cluster: three far points and one near point
  const std::vector<Complex> outer{
      {4.3, 1.0}, {3.85, 1.26}, {3.85, 0.74}, {4.01, 1.008}};
  const auto report = spectra::match_outliers(outer, spec, 1000);
  const auto& group = report.groups[0];
  CHECK_FALSE(group.count_mismatch);
  REQUIRE(group.classes.size() == 2);
  CHECK(group.classes[0].raw.size() == 3);
  CHECK(group.classes[1].raw.size() == 1);
  CHECK(std::abs(group.classes[1].raw[0] - Complex{4.01, 1.008}) < 1e-12);
  // rescale rates: n^{1/6} for p = 3, n^{1/2} for p = 1
  CHECK(std::abs(group.classes[0].rescaled[0] -
                 std::pow(1000.0, 1.0 / 6.0) * (group.classes[0].raw[0] - Complex{4, 1})) < 1e-12);
  CHECK(std::abs(group.classes[1].rescaled[0] -
                 std::pow(1000.0, 0.5) * (group.classes[1].raw[0] - Complex{4, 1})) < 1e-12);
}

TEST_CASE("matching: bulk-level eigenvalue groups expect no outliers") {
  const JordanSpec fig2({{Complex{1, 0}, {{1, 1}}},
                         {Complex{4, 1}, {{1, 1}}},
                         {Complex{4, -1}, {{1, 1}}}});
  const std::vector<Complex> outer{{4.05, 1.02}, {4.05, -1.02}};
  const auto report = spectra::match_outliers(outer, fig2, 1000, 2.96);
  CHECK(report.groups[0].expected_count == 0);  // theta = 1 sits inside the ring
  CHECK(report.groups[0].classes[0].raw.empty());
  CHECK_FALSE(report.any_mismatch());
  CHECK(report.matched_count() == 2);

  // without the modulus floor the theta = 1 group would flag a mismatch
  const auto strict = spectra::match_outliers(outer, fig2, 1000);
  CHECK(strict.groups[0].count_mismatch);
}

TEST_CASE("matching: surplus points are kept as extras and flagged") {
  const JordanSpec spec({{Complex{3, 0}, {{1, 1}}}});
  const std::vector<Complex> outer{{3.1, 0}, {2.9, 0.1}};
  const auto report = spectra::match_outliers(outer, spec, 100);
  CHECK(report.groups[0].count_mismatch);
  CHECK(report.groups[0].classes[0].raw.size() == 1);
  CHECK(report.groups[0].extras.size() == 1);
  CHECK(report.matched_count() == 2);
}

TEST_CASE("outlier CSV schema round-trips") {
  const JordanSpec spec({{Complex{4, 1}, {{3, 1}, {1, 1}}}});
  const std::vector<Complex> outer{
      {4.3, 1.0}, {3.85, 1.26}, {3.85, 0.74}, {4.01, 1.008}};
  const auto report = spectra::match_outliers(outer, spec, 1000);
  std::stringstream ss;
  spectra::write_outlier_csv_header(ss, false);
  spectra::write_outlier_csv_rows(ss, report);

  std::string header;
  std::getline(ss, header);
  CHECK(header ==
        "group_index,theta_re,theta_im,rate_class,p,lambda_re,lambda_im,rescaled_re,rescaled_im");
  int rows = 0;
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    ++rows;
    std::stringstream fields(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(fields, field, ',')) values.push_back(std::stod(field));
    REQUIRE(values.size() == 9);
    const Complex raw{values[5], values[6]};
    const Complex rescaled{values[7], values[8]};
    const Complex theta{values[1], values[2]};
    const double rate = std::pow(1000.0, 1.0 / (2.0 * values[4]));
    CHECK(std::abs(rescaled - rate * (raw - theta)) < 1e-9);
  }
  CHECK(rows == 4);
}

}  // TEST_SUITE
