#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rankone {

/// Seeded generator with platform-independent draws.
///
/// The standard distributions are implementation-defined, so uniform and
/// normal variates are derived directly from the 64-bit engine output. Golden
/// files and report digests depend on this being stable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for trial `stream` of a run seeded with `seed`.
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [lo, hi].
  long uniform_int(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

  /// Standard normal via Box-Muller.
  double normal();

  /// Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal();

  /// Uniform on the closed disc of the given radius.
  std::complex<double> in_disc(double radius);

  /// Uniform on the unit circle.
  std::complex<double> on_circle();

 private:
  std::mt19937_64 engine_;
};

}  // namespace rankone
