#include "ringlab/seeded_stream.hpp"

#include <cmath>

namespace ringlab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeededStream SeededStream::substream(std::uint64_t lane) const {
  // lane spacing is far below the multiplier, so distinct (index, lane)
  // pairs stay distinct before mixing.
  return {base_seed, mix64(stream_index * kGolden + lane + 1)};
}

RandomStream::RandomStream(const SeededStream& stream) {
  std::uint64_t sm = mix64(stream.base_seed) ^ mix64(stream.stream_index + kGolden);
  for (auto& word : state_) {
    sm += kGolden;
    word = mix64(sm);
  }
}

std::uint64_t RandomStream::next() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]: keeps the log finite
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.14159265358979323846 * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::complex<double> RandomStream::gaussian_complex() {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  const double re = gaussian();
  const double im = gaussian();
  return {re * kInvSqrt2, im * kInvSqrt2};
}

}  // namespace ringlab
