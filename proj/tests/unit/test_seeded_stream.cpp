#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ringlab/seeded_stream.hpp"

using namespace ringlab;

TEST_SUITE("rng") {

TEST_CASE("identical stream handles reproduce bit-identical output") {
  RandomStream a(SeededStream{42, 7});
  RandomStream b(SeededStream{42, 7});
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
  RandomStream c(SeededStream{42, 7});
  RandomStream d(SeededStream{42, 7});
  for (int i = 0; i < 100; ++i) {
    REQUIRE(c.gaussian() == d.gaussian());
    REQUIRE(c.gaussian_complex() == d.gaussian_complex());
  }
}

TEST_CASE("distinct stream indices decorrelate") {
  RandomStream a(SeededStream{42, 0});
  RandomStream b(SeededStream{42, 1});
  int agree = 0;
  for (int i = 0; i < 64; ++i) agree += a.next() == b.next();
  CHECK(agree == 0);
}

TEST_CASE("substreams are distinct from each other and the parent") {
  const SeededStream base{9, 3};
  std::set<std::uint64_t> seen{base.stream_index};
  for (std::uint64_t lane = 0; lane < 64; ++lane)
    REQUIRE(seen.insert(base.substream(lane).stream_index).second);
}

TEST_CASE("null stream sentinel") {
  CHECK(SeededStream::null().is_null());
  CHECK_FALSE(SeededStream{0, 0}.is_null());
}

TEST_CASE("gaussian moments") {
  RandomStream stream(SeededStream{1234, 0});
  const int n = 200000;
  double sum = 0, sum2 = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = stream.gaussian();
    sum += g;
    sum2 += g * g;
    sum4 += g * g * g * g;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("circular complex gaussian: unit variance, no pseudo-variance") {
  RandomStream stream(SeededStream{99, 5});
  const int n = 200000;
  double abs2 = 0;
  std::complex<double> pseudo{0, 0}, mean{0, 0};
  for (int i = 0; i < n; ++i) {
    const auto z = stream.gaussian_complex();
    abs2 += std::norm(z);
    pseudo += z * z;
    mean += z;
  }
  CHECK(abs2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(pseudo) / n < 0.01);
  CHECK(std::abs(mean) / n < 0.01);
}

}  // TEST_SUITE
