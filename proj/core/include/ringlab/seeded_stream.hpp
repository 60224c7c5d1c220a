#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace ringlab {

/// Handle for one reproducible random stream.
///
/// Identical (base_seed, stream_index) pairs reproduce identical draws
/// bit-for-bit; distinct stream indices give statistically independent
/// streams, so parallel trials can be keyed by index.  The designated null
/// stream is a sentinel consumers may treat as "no randomness" (e.g. a
/// deterministic embedding fixture); it never produces draws itself.
struct SeededStream {
  std::uint64_t base_seed = 0;
  std::uint64_t stream_index = 0;

  static constexpr std::uint64_t kNullIndex = ~std::uint64_t{0};

  static SeededStream null() { return {0, kNullIndex}; }
  bool is_null() const { return stream_index == kNullIndex; }

  /// Derived stream for an independent lane of the same logical stream.
  SeededStream substream(std::uint64_t lane) const;

  friend bool operator==(const SeededStream&, const SeededStream&) = default;
};

/// Counter-seeded xoshiro256++ generator with platform-independent
/// uniform/Gaussian output (no libstdc++ distributions involved).
class RandomStream {
 public:
  explicit RandomStream(const SeededStream& stream);

  std::uint64_t next();

  /// Uniform on [0, 1).
  double uniform();

  /// Standard real Gaussian, Box-Muller with one cached value.
  double gaussian();

  /// Standard circular complex Gaussian: E z = 0, E|z|^2 = 1, E z^2 = 0.
  std::complex<double> gaussian_complex();

 private:
  std::array<std::uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ringlab
