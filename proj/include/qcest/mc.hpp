#pragma once

#include <cstdint>

#include "qcest/estimator.hpp"

namespace qcest {

struct MonteCarloStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Streaming mean/variance accumulator (Welford), mergeable across blocks.
struct WelfordAccumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const WelfordAccumulator& other);
  MonteCarloStats stats() const;
};

/// Samples per Welford block.  Sample i always draws from substream(seed, i)
/// and blocks are merged in index order, so the result is independent of
/// the number of OpenMP threads.
inline constexpr std::uint64_t kMcBlock = 4096;

/// Haar averages of the estimation fidelity (Monte Carlo mode).
MonteCarloStats average_fidelity_mc(const Povm& povm, std::uint64_t samples, std::uint64_t seed);
MonteCarloStats average_fidelity_mc_serial(const Povm& povm, std::uint64_t samples,
                                           std::uint64_t seed);

/// Monte Carlo estimate of the Haar moment |<phi|psi>|^(2k) against a fixed
/// reference level; oracle for overlap_moment.
MonteCarloStats overlap_moment_mc(int d, int k, std::uint64_t samples, std::uint64_t seed);
MonteCarloStats overlap_moment_mc_serial(int d, int k, std::uint64_t samples, std::uint64_t seed);

namespace detail {

template <typename F>
MonteCarloStats haar_mean_serial(int d, std::uint64_t samples, std::uint64_t seed, F&& f) {
  WelfordAccumulator acc;
  for (std::uint64_t i = 0; i < samples; ++i) {
    SplitMix64 rng = substream(seed, i);
    acc.add(f(haar_random_state(d, rng)));
  }
  return acc.stats();
}

MonteCarloStats haar_mean_blocked(int d, std::uint64_t samples, std::uint64_t seed,
                                  double (*f)(const PureState&, const void*), const void* ctx);

}  // namespace detail

}  // namespace qcest
