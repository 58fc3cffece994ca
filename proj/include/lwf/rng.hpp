#pragma once

#include <cstdint>
#include <random>

namespace lwf {

/// SplitMix64 finaliser; used to derive decorrelated seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of substream `stream` under `seed`. Distinct streams of one seed, and
/// equal streams of distinct seeds, give unrelated generators.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ull));
}

/// Seeded 64-bit generator with the variate primitives the samplers need.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// The transformations below are written out (instead of the <random>
/// distributions, whose algorithms are implementation-defined) so that a
/// seed gives the same variates under every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(substream_seed(seed, stream));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 via the U^(1/shape) boost.
  double gamma(double shape);

  double chi_square(double df) { return 2.0 * gamma(0.5 * df); }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lwf
