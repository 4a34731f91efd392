#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace urt {

/// splitmix64 finalizer; used to whiten substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random source built on std::mt19937_64, whose output
/// sequence is fixed by the standard. All value conversions are done
/// explicitly here (not via std::*_distribution, which is
/// implementation-defined), so streams replay identically everywhere.
///
/// Substreams: `substream(seed, i)` seeds an independent generator with
/// mix64(seed ^ i). Work partitioned by index therefore produces identical
/// results regardless of how it is split across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(seed ^ index));
  }

  std::uint64_t bits() { return gen_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; never returns zero.
  double uniform_open01() { return 1.0 - uniform01(); }

  /// Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller (cosine branch only; two uniforms
  /// per draw, no cached state, so the stream layout stays obvious).
  double normal() {
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
  }

  /// Circularly-symmetric complex normal with unit variance
  /// (E|z|^2 = 1), drawn as a Rayleigh amplitude and uniform phase.
  std::complex<double> cnormal() {
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    const double phi = 6.28318530717958647692 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace urt
