#pragma once

#include <span>
#include <variant>
#include <vector>

#include "ringlab/types.hpp"

namespace ringlab::profiles {

/// Singular-value laws with compact support in (0, M].
struct ExplicitList {
  std::vector<double> values;
};
struct Uniform {
  double lo = 0;
  double hi = 0;
};
/// Density pi^-1 sqrt(4 - x^2) on [0, 2].
struct QuarterCircle {};
struct PointMass {
  double c = 0;
};

using SingularProfile = std::variant<ExplicitList, Uniform, QuarterCircle, PointMass>;

/// Annulus radii: inner a, outer b, with 0 <= a <= b.  a is exactly zero
/// when the inverse second moment diverges.
struct RingGeometry {
  double a = 0;
  double b = 0;
};

/// Throws std::invalid_argument on out-of-domain parameters
/// (non-positive masses, inverted Uniform bounds, empty list).
void validate(const SingularProfile& profile);

/// Integral of x^2 against the profile; closed form except for
/// ExplicitList, which averages.
double second_moment(const SingularProfile& profile);

/// Integral of x^-2; +infinity when divergent (QuarterCircle).
double inverse_second_moment(const SingularProfile& profile);

RingGeometry ring_radii(const SingularProfile& profile);

/// Deterministic quantile sequence s_i = F^-1((i - 1/2) / n), ascending.
/// QuarterCircle quantiles are found by bisection on the CDF to absolute
/// tolerance 1e-12.
std::vector<double> realize(const SingularProfile& profile, int n);

/// (1/n) sum 1/(z - s_i).  Requires Im z > 0; diagnostic for the
/// Stieltjes-transform hypothesis, threshold left to the caller.
Complex stieltjes(std::span<const double> values, Complex z);

/// CDF of the quarter-circle density on [0, 2] (clamped outside).
double quarter_circle_cdf(double x);

}  // namespace ringlab::profiles
