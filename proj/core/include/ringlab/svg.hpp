#pragma once

#include <iosfwd>
#include <span>

#include "ringlab/profiles.hpp"
#include "ringlab/types.hpp"

namespace ringlab::svg {

/// Scatter of complex points (blue dots) with theta markers (red crosses)
/// over the ring: solid circles at |z| = a and |z| = b, dashed at the
/// classification radii a - delta and b + 2 eps.  Output is byte-stable
/// for fixed inputs.
void write_scatter(std::ostream& out, std::span<const Complex> points,
                   std::span<const Complex> markers, const profiles::RingGeometry& ring,
                   double epsilon, double delta, int size_px = 720);

}  // namespace ringlab::svg
