#include "qcest/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qcest {

void WelfordAccumulator::add(double x) {
  count += 1;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void WelfordAccumulator::merge(const WelfordAccumulator& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double delta = other.mean - mean;
  const std::uint64_t total = count + other.count;
  mean += delta * static_cast<double>(other.count) / static_cast<double>(total);
  m2 += other.m2 + delta * delta * static_cast<double>(count) *
                       static_cast<double>(other.count) / static_cast<double>(total);
  count = total;
}

MonteCarloStats WelfordAccumulator::stats() const {
  MonteCarloStats s;
  s.samples = count;
  s.mean = mean;
  if (count > 1) {
    const double variance = m2 / static_cast<double>(count - 1);
    s.std_error = std::sqrt(variance / static_cast<double>(count));
  }
  return s;
}

namespace detail {

MonteCarloStats haar_mean_blocked(int d, std::uint64_t samples, std::uint64_t seed,
                                  double (*f)(const PureState&, const void*), const void* ctx) {
  if (samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const std::int64_t blocks =
      static_cast<std::int64_t>((samples + kMcBlock - 1) / kMcBlock);
  std::vector<WelfordAccumulator> partial(static_cast<std::size_t>(blocks));

#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    WelfordAccumulator acc;
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kMcBlock;
    const std::uint64_t end = std::min(begin + kMcBlock, samples);
    for (std::uint64_t i = begin; i < end; ++i) {
      SplitMix64 rng = substream(seed, i);
      acc.add(f(haar_random_state(d, rng), ctx));
    }
    partial[static_cast<std::size_t>(b)] = acc;
  }

  WelfordAccumulator total;
  for (const WelfordAccumulator& acc : partial) total.merge(acc);
  return total.stats();
}

}  // namespace detail

namespace {

double fidelity_sample(const PureState& psi, const void* ctx) {
  return estimation_fidelity_exact(*static_cast<const Povm*>(ctx), psi);
}

struct MomentContext {
  int k = 0;
};

double moment_sample(const PureState& psi, const void* ctx) {
  const int k = static_cast<const MomentContext*>(ctx)->k;
  return std::pow(std::norm(psi.amplitude(0)), k);
}

}  // namespace

MonteCarloStats average_fidelity_mc(const Povm& povm, std::uint64_t samples, std::uint64_t seed) {
  return detail::haar_mean_blocked(povm.d(), samples, seed, &fidelity_sample, &povm);
}

MonteCarloStats average_fidelity_mc_serial(const Povm& povm, std::uint64_t samples,
                                           std::uint64_t seed) {
  return detail::haar_mean_serial(povm.d(), samples, seed,
                                  [&](const PureState& psi) { return estimation_fidelity_exact(povm, psi); });
}

MonteCarloStats overlap_moment_mc(int d, int k, std::uint64_t samples, std::uint64_t seed) {
  if (k < 0) throw std::invalid_argument("overlap moment order must be >= 0");
  MomentContext ctx{k};
  return detail::haar_mean_blocked(d, samples, seed, &moment_sample, &ctx);
}

MonteCarloStats overlap_moment_mc_serial(int d, int k, std::uint64_t samples, std::uint64_t seed) {
  if (k < 0) throw std::invalid_argument("overlap moment order must be >= 0");
  return detail::haar_mean_serial(d, samples, seed, [k](const PureState& psi) {
    return std::pow(std::norm(psi.amplitude(0)), k);
  });
}

}  // namespace qcest
