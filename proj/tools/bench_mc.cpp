// Compares the OpenMP Monte Carlo kernels against the serial reference, and
// the occupation-coordinate cloner against the full-space route.
#include <cmath>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
static double omp_get_wtime() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}
static int omp_get_max_threads() { return 1; }
#endif

#include "qcest/cloner.hpp"
#include "qcest/mc.hpp"

using namespace qcest;

int main(int argc, char** argv) {
  const std::uint64_t samples = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1000000;
  const std::uint64_t seed = 20250808;
  std::printf("threads: %d, samples: %llu\n", omp_get_max_threads(),
              static_cast<unsigned long long>(samples));

  {
    const Povm povm = build_covariant_povm(3, 2, haar_frame(3, 400, seed),
                                           PovmBuildOptions{.moment_order = 3});
    double t0 = omp_get_wtime();
    const MonteCarloStats serial = average_fidelity_mc_serial(povm, samples, seed);
    double t1 = omp_get_wtime();
    const MonteCarloStats parallel = average_fidelity_mc(povm, samples, seed);
    double t2 = omp_get_wtime();
    std::printf("average_fidelity_mc (d=3, N=2, %d outcomes)\n", povm.size());
    std::printf("  serial   %.3fs  mean %.12f\n", t1 - t0, serial.mean);
    std::printf("  openmp   %.3fs  mean %.12f  speedup %.2fx  |diff| %.2e\n", t2 - t1,
                parallel.mean, (t1 - t0) / (t2 - t1), std::abs(parallel.mean - serial.mean));
  }

  {
    double t0 = omp_get_wtime();
    const MonteCarloStats serial = overlap_moment_mc_serial(3, 3, samples, seed);
    double t1 = omp_get_wtime();
    const MonteCarloStats parallel = overlap_moment_mc(3, 3, samples, seed);
    double t2 = omp_get_wtime();
    std::printf("overlap_moment_mc (d=3, k=3), closed form %.12f\n", overlap_moment(3, 3));
    std::printf("  serial   %.3fs  mean %.12f\n", t1 - t0, serial.mean);
    std::printf("  openmp   %.3fs  mean %.12f  speedup %.2fx  |diff| %.2e\n", t2 - t1,
                parallel.mean, (t1 - t0) / (t2 - t1), std::abs(parallel.mean - serial.mean));
  }

  {
    const int reps = 200;
    SplitMix64 rng = substream(seed, 9);
    const SymmetricState input = SymmetricState::product(haar_random_state(3, rng), 2);
    double t0 = omp_get_wtime();
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) acc += clone(input, 5).matrix()(0, 0).real();
    double t1 = omp_get_wtime();
    for (int i = 0; i < reps; ++i) acc -= clone_occupation(input, 5).matrix()(0, 0).real();
    double t2 = omp_get_wtime();
    std::printf("clone 2 -> 5 (d=3), %d reps\n", reps);
    std::printf("  full-space  %.3fs\n", t1 - t0);
    std::printf("  occupation  %.3fs  speedup %.2fx  (checksum %.2e)\n", t2 - t1,
                (t1 - t0) / (t2 - t1), acc);
  }
  return 0;
}
