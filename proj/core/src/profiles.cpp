#include "ringlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ringlab::profiles {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double quarter_circle_quantile(double q) {
  // Bisection on the closed-form CDF; absolute tolerance 1e-12.
  double lo = 0.0, hi = 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (quarter_circle_cdf(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double quarter_circle_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return (0.5 * x * std::sqrt(4.0 - x * x) + 2.0 * std::asin(0.5 * x)) / kPi;
}

void validate(const SingularProfile& profile) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          require(!p.values.empty(), "ExplicitList: needs at least one value");
          for (double v : p.values)
            require(v > 0.0 && std::isfinite(v), "ExplicitList: values must be positive and finite");
        } else if constexpr (std::is_same_v<T, Uniform>) {
          require(p.lo > 0.0 && p.hi > p.lo && std::isfinite(p.hi),
                  "Uniform: requires 0 < lo < hi < infinity");
        } else if constexpr (std::is_same_v<T, PointMass>) {
          require(p.c > 0.0 && std::isfinite(p.c), "PointMass: mass must sit at a positive point");
        }
      },
      profile);
}

double second_moment(const SingularProfile& profile) {
  validate(profile);
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          double acc = 0.0;
          for (double v : p.values) acc += v * v;
          return acc / static_cast<double>(p.values.size());
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return (p.hi * p.hi * p.hi - p.lo * p.lo * p.lo) / (3.0 * (p.hi - p.lo));
        } else if constexpr (std::is_same_v<T, QuarterCircle>) {
          return 1.0;
        } else {
          return p.c * p.c;
        }
      },
      profile);
}

double inverse_second_moment(const SingularProfile& profile) {
  validate(profile);
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          double acc = 0.0;
          for (double v : p.values) acc += 1.0 / (v * v);
          return acc / static_cast<double>(p.values.size());
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return 1.0 / (p.lo * p.hi);
        } else if constexpr (std::is_same_v<T, QuarterCircle>) {
          // Density ~ x^0 near the origin, so the integral of x^-2 diverges.
          return std::numeric_limits<double>::infinity();
        } else {
          return 1.0 / (p.c * p.c);
        }
      },
      profile);
}

RingGeometry ring_radii(const SingularProfile& profile) {
  const double inv2 = inverse_second_moment(profile);
  RingGeometry ring;
  ring.b = std::sqrt(second_moment(profile));
  ring.a = std::isinf(inv2) ? 0.0 : 1.0 / std::sqrt(inv2);
  return ring;
}

std::vector<double> realize(const SingularProfile& profile, int n) {
  validate(profile);
  require(n >= 1, "realize: n must be positive");
  std::vector<double> out(static_cast<std::size_t>(n));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitList>) {
          std::vector<double> sorted = p.values;
          std::sort(sorted.begin(), sorted.end());
          const auto len = static_cast<double>(sorted.size());
          for (int i = 0; i < n; ++i) {
            const double q = (i + 0.5) / n;
            auto idx = static_cast<std::ptrdiff_t>(std::ceil(q * len)) - 1;
            idx = std::clamp<std::ptrdiff_t>(idx, 0, sorted.size() - 1);
            out[static_cast<std::size_t>(i)] = sorted[static_cast<std::size_t>(idx)];
          }
        } else if constexpr (std::is_same_v<T, Uniform>) {
          for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = p.lo + (p.hi - p.lo) * (i + 0.5) / n;
        } else if constexpr (std::is_same_v<T, QuarterCircle>) {
          for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = quarter_circle_quantile((i + 0.5) / n);
        } else {
          std::fill(out.begin(), out.end(), p.c);
        }
      },
      profile);
  return out;
}

Complex stieltjes(std::span<const double> values, Complex z) {
  require(z.imag() > 0.0, "stieltjes: requires Im z > 0");
  require(!values.empty(), "stieltjes: empty sample");
  Complex acc{0.0, 0.0};
  for (double s : values) acc += 1.0 / (z - s);
  return acc / static_cast<double>(values.size());
}

}  // namespace ringlab::profiles
