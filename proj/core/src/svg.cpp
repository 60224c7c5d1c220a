#include "ringlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ringlab::svg {
namespace {

std::string fmt(double x) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.3f", x);
  return buffer;
}

}  // namespace

void write_scatter(std::ostream& out, std::span<const Complex> points,
                   std::span<const Complex> markers, const profiles::RingGeometry& ring,
                   double epsilon, double delta, int size_px) {
  double radius = ring.b + 2.0 * epsilon;
  for (const Complex& z : points) radius = std::max(radius, std::abs(z));
  for (const Complex& z : markers) radius = std::max(radius, std::abs(z));
  radius *= 1.08;
  const double scale = size_px / (2.0 * radius);
  const double mid = size_px / 2.0;
  const auto px = [&](double x) { return mid + scale * x; };
  const auto py = [&](double y) { return mid - scale * y; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
      << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto circle = [&](double r, const char* stroke, bool dashed) {
    if (r <= 0.0) return;
    out << "<circle cx=\"" << fmt(mid) << "\" cy=\"" << fmt(mid) << "\" r=\"" << fmt(scale * r)
        << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1\"";
    if (dashed) out << " stroke-dasharray=\"5,4\"";
    out << "/>\n";
  };
  circle(ring.b, "#888888", false);
  circle(ring.a, "#888888", false);
  circle(ring.b + 2.0 * epsilon, "#bbbbbb", true);
  if (ring.a > 0.0) circle(ring.a - delta, "#bbbbbb", true);

  for (const Complex& z : points)
    out << "<circle cx=\"" << fmt(px(z.real())) << "\" cy=\"" << fmt(py(z.imag()))
        << "\" r=\"2\" fill=\"#1f77b4\" fill-opacity=\"0.55\"/>\n";

  const double arm = 5.0;
  for (const Complex& z : markers) {
    const double x = px(z.real()), y = py(z.imag());
    out << "<path d=\"M" << fmt(x - arm) << ' ' << fmt(y) << " L" << fmt(x + arm) << ' ' << fmt(y)
        << " M" << fmt(x) << ' ' << fmt(y - arm) << " L" << fmt(x) << ' ' << fmt(y + arm)
        << "\" stroke=\"#d62728\" stroke-width=\"1.6\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace ringlab::svg
