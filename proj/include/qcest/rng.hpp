#pragma once

#include <cmath>
#include <cstdint>

namespace qcest {

/// Counter-splittable pseudo-random stream (splitmix64).
///
/// All randomness in the library flows through this generator so that
/// results are reproducible across platforms and independent of thread
/// count: stream k of a root seed is `substream(root, k)`, and parallel
/// code assigns one substream per logical work item (sample, probe, ...),
/// never per worker thread.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1].
  double uniform() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }
};

/// Derive the k-th independent substream of a root seed.
inline SplitMix64 substream(std::uint64_t root, std::uint64_t index) {
  SplitMix64 mixer(root + (index + 1) * 0x9E3779B97F4A7C15ULL);
  return SplitMix64(mixer.next());
}

/// Standard normal deviate (Box-Muller, no state cached between calls).
inline double gaussian(SplitMix64& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace qcest
