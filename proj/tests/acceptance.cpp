// Acceptance suite: each criterion prints exactly one PASS/FAIL line; the
// binary exits nonzero if any criterion fails.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qcest/mc.hpp"
#include "qcest/theorem.hpp"
#include "oracles.hpp"

using namespace qcest;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20250808;

struct PovmKey {
  int d, copies, order;
  bool operator<(const PovmKey& o) const {
    return std::tie(d, copies, order) < std::tie(o.d, o.copies, o.order);
  }
};

std::map<PovmKey, Povm> g_cache;

const Povm& design_povm(int d, int copies) {
  const PovmKey key{d, copies, copies + 1};
  auto it = g_cache.find(key);
  if (it == g_cache.end()) {
    const std::uint64_t dim = sym_dimension(d, copies + 1);
    Povm povm = build_covariant_povm(
        d, copies,
        haar_frame(d, static_cast<int>(4 * dim * dim),
                   substream(kSeed, static_cast<std::uint64_t>(100 * d + copies)).state),
        PovmBuildOptions{.moment_order = copies + 1});
    it = g_cache.emplace(key, std::move(povm)).first;
  }
  return it->second;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome outcome;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(outcome);
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail << "exception: " << e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!outcome.pass) ++g_failures;
  std::printf("%s criterion %d (%s) [%.1fs]%s%s\n", outcome.pass ? "PASS" : "FAIL", number,
              name.c_str(), seconds, outcome.detail.str().empty() ? "" : ": ",
              outcome.detail.str().c_str());
  std::fflush(stdout);
}

double max_fidelity_deviation(int d, int n, int m, int probes) {
  const double expected = cloner_fidelity(ClonerSpec(d, n, m));
  double dev = 0.0;
  for (int i = 0; i <= probes; ++i) {
    SplitMix64 rng =
        substream(kSeed, static_cast<std::uint64_t>(100000 + 1000 * d + 100 * n + 10 * m + i));
    const PureState psi = i == 0 ? PureState::basis_state(d, 0) : haar_random_state(d, rng);
    const SymmetricState out = clone(SymmetricState::product(psi, n), m);
    dev = std::max(dev, std::abs(fidelity_pure(psi, reduce_single_particle(out)) - expected));
  }
  return dev;
}

}  // namespace

int main() {
  // 1. Simulated cloner reproduces the closed-form fidelity on the grid.
  criterion(1, "cloner formula reproduction", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    double max_dev = 0.0;
    for (int d = 2; d <= 3; ++d) {
      for (int n = 1; n <= 3; ++n) {
        for (int m = n; m <= n + 3; ++m) {
          max_dev = std::max(max_dev, max_fidelity_deviation(d, n, m, 20));
        }
      }
    }
    o.require(max_dev <= 1e-9, "max fidelity deviation " + std::to_string(max_dev));
    const SymmetricState a = clone(SymmetricState::product(PureState::basis_state(2, 0), 1), 2);
    o.require(std::abs(fidelity_pure(PureState::basis_state(2, 0), reduce_single_particle(a)) -
                       5.0 / 6.0) <= 1e-9,
              "(2,1,2) != 5/6");
    const SymmetricState b = clone(SymmetricState::product(PureState::basis_state(3, 0), 1), 2);
    o.require(std::abs(fidelity_pure(PureState::basis_state(3, 0), reduce_single_particle(b)) -
                       3.0 / 4.0) <= 1e-9,
              "(3,1,2) != 3/4");
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < 30.0, "runtime " + std::to_string(seconds) + "s exceeds 30s");
  });

  // 2. Every constructed complete POVM reaches (N+1)/(N+d); Monte Carlo agrees.
  criterion(2, "estimation optimum reproduction", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int d = 2; d <= 3; ++d) {
      for (int n = 1; n <= 3; ++n) {
        const Povm& povm = design_povm(d, n);
        const double expected = (n + 1.0) / (n + d);
        const double exact = average_fidelity_exact(povm);
        o.require(std::abs(exact - expected) <= 1e-9,
                  "exact average off at d=" + std::to_string(d) + " N=" + std::to_string(n));
        const MonteCarloStats mc = average_fidelity_mc(
            povm, 100000, substream(kSeed, static_cast<std::uint64_t>(7000 + 10 * d + n)).state);
        o.require(std::abs(mc.mean - exact) <= 3.0 * mc.std_error + 1e-12,
                  "MC disagrees at d=" + std::to_string(d) + " N=" + std::to_string(n));
      }
    }
    // Named values from the closed form.
    o.require(std::abs(average_fidelity_exact(design_povm(2, 1)) - 2.0 / 3.0) <= 1e-9,
              "d=2,N=1 != 2/3");
    o.require(std::abs(average_fidelity_exact(design_povm(3, 1)) - 1.0 / 2.0) <= 1e-9,
              "d=3,N=1 != 1/2");
    o.require(std::abs(average_fidelity_exact(design_povm(2, 3)) - 4.0 / 5.0) <= 1e-9,
              "d=2,N=3 != 4/5");
    // A merely-complete POVM keeps per-input variance: its 3-sigma bound is
    // statistical, and the same closed form must hold.
    const Povm complete_only =
        build_covariant_povm(2, 2, haar_frame(2, 36, substream(kSeed, 7777).state));
    const double exact = average_fidelity_exact(complete_only);
    o.require(std::abs(exact - 0.75) <= 1e-9, "complete-only POVM average off");
    const MonteCarloStats mc =
        average_fidelity_mc(complete_only, 100000, substream(kSeed, 7778).state);
    o.require(mc.std_error > 1e-9, "expected nonzero MC variance");
    o.require(std::abs(mc.mean - exact) <= 3.0 * mc.std_error, "complete-only MC disagrees");
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < 120.0, "runtime " + std::to_string(seconds) + "s exceeds 2min");
  });

  // 3. Both inequality directions and the equality across the grid.
  criterion(3, "theorem equality", [](Outcome& o) {
    for (int d = 2; d <= 3; ++d) {
      for (int n = 1; n <= 3; ++n) {
        const Povm& povm_n = design_povm(d, n);
        for (int l = n; l <= n + 3; ++l) {
          const InequalityRecord eq11 = estimate_then_prepare_as_cloner(d, n, l, povm_n);
          o.require(eq11.slack() >= -1e-9,
                    "eq11 slack negative at d=" + std::to_string(d) + " N=" + std::to_string(n) +
                        " L=" + std::to_string(l));
        }
        const InequalityRecord eq15 = opposite_inequality(d, n, povm_n);
        o.require(eq15.slack() >= -1e-9, "eq15 slack negative at d=" + std::to_string(d));
        o.require(std::abs(eq15.rhs - eq15.lhs) <= 1e-8,
                  "equality gap " + std::to_string(std::abs(eq15.rhs - eq15.lhs)) + " at d=" +
                      std::to_string(d) + " N=" + std::to_string(n));
      }
    }
  });

  // 4. Shrinking factors multiply and the total fidelity is L-independent.
  criterion(4, "shrinking multiplication and L-independence", [](Outcome& o) {
    for (int d = 2; d <= 3; ++d) {
      for (int n = 1; n <= 3; ++n) {
        const std::vector<PureState> probes = haar_frame(
            d, 6, substream(kSeed, static_cast<std::uint64_t>(9000 + 10 * d + n)).state);
        const double optimum = cloner_fidelity_asymptotic(d, n);
        for (int l = n; l <= n + 3; ++l) {
          const ConcatenationResult con = clone_then_estimate(d, n, l, design_povm(d, l), probes);
          o.require(std::abs(con.eta_total - con.eta_clone * con.eta_estimate) <= 1e-8,
                    "multiplication fails at d=" + std::to_string(d) + " N=" + std::to_string(n) +
                        " L=" + std::to_string(l));
          o.require(std::abs(con.total_fidelity - optimum) <= 1e-8,
                    "L-dependence at d=" + std::to_string(d) + " N=" + std::to_string(n) +
                        " L=" + std::to_string(l));
        }
      }
    }
  });

  // 5. The channel extends to entangled symmetric-subspace inputs.
  criterion(5, "symmetric-subspace extension", [](Outcome& o) {
    for (int d = 2; d <= 3; ++d) {
      for (int n = 1; n <= 2; ++n) {
        for (int l = n + 1; l <= n + 2; ++l) {
          SplitMix64 rng =
              substream(kSeed, static_cast<std::uint64_t>(9500 + 100 * d + 10 * n + l));
          const SymmetricState entangled =
              clone(SymmetricState::product(haar_random_state(d, rng), n), l);
          const ExtensionReport r = symmetric_input_extension(design_povm(d, l), entangled);
          o.require(r.max_abs_deviation <= 1e-8,
                    "extension deviates at d=" + std::to_string(d) + " N=" + std::to_string(n) +
                        " L=" + std::to_string(l));
        }
      }
    }
  });

  // 6. Structural property suites.
  criterion(6, "structural properties", [](Outcome& o) {
    for (int d = 2; d <= 5; ++d) {
      const GeneratorBasis basis(d);
      double trace_dev = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        trace_dev = std::max(trace_dev, std::abs(basis[i].trace()));
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const double expected = i == j ? 2.0 : 0.0;
          trace_dev =
              std::max(trace_dev, std::abs((basis[i] * basis[j]).trace().real() - expected));
        }
      }
      o.require(trace_dev <= 1e-12, "generator traces at d=" + std::to_string(d));

      double length_dev = 0.0, roundtrip_dev = 0.0;
      for (int i = 0; i < 100; ++i) {
        SplitMix64 rng = substream(kSeed, static_cast<std::uint64_t>(11000 + 100 * d + i));
        const PureState psi = haar_random_state(d, rng);
        const BlochVector lambda = bloch_from_density(DensityOperator::pure(psi), basis);
        length_dev = std::max(length_dev, std::abs(lambda.norm() - pure_bloch_length(d)));
        const DensityOperator rho = oracles::random_density(d, rng);
        roundtrip_dev = std::max(
            roundtrip_dev,
            oracles::max_abs(density_from_bloch(bloch_from_density(rho, basis), basis).matrix() -
                             rho.matrix()));
      }
      o.require(length_dev <= 1e-10, "bloch length at d=" + std::to_string(d));
      o.require(roundtrip_dev <= 1e-12, "bloch round-trip at d=" + std::to_string(d));
    }

    for (int d = 2; d <= 3; ++d) {
      for (int n = 2; n <= 4; ++n) {
        const Matrix s = symmetrizer(d, n);
        o.require(
            oracles::max_abs(s * s - s) <= 1e-12 && oracles::max_abs(s - s.adjoint()) <= 1e-12,
            "symmetrizer idempotence at d=" + std::to_string(d) + " N=" + std::to_string(n));
        Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
        const auto rank = (eig.eigenvalues().array() > 0.5).count();
        o.require(rank == static_cast<Eigen::Index>(sym_dimension(d, n)),
                  "symmetrizer rank at d=" + std::to_string(d) + " N=" + std::to_string(n));
      }
    }

    for (int d = 2; d <= 3; ++d) {
      for (int n = 1; n <= 3; ++n) {
        o.require(validate_povm(design_povm(d, n)).completeness_residual <= 1e-8,
                  "POVM completeness at d=" + std::to_string(d) + " N=" + std::to_string(n));
      }
    }

    for (int d = 2; d <= 3; ++d) {
      SplitMix64 rng = substream(kSeed, static_cast<std::uint64_t>(12000 + d));
      const SymmetricState cloned =
          clone(SymmetricState::product(haar_random_state(d, rng), 1), 2);
      const std::uint64_t dim = sym_dimension(d, 2);
      const PseudoMixture pm = pseudo_mixture_decompose(
          cloned, haar_frame(d, static_cast<int>(2 * dim * dim + 20),
                             substream(kSeed, 12100 + static_cast<std::uint64_t>(d)).state));
      o.require(pm.residual <= 1e-8, "pseudo-mixture residual at d=" + std::to_string(d));
      o.require(std::abs(pm.weight_sum() - 1.0) <= 1e-8,
                "pseudo-mixture weight sum at d=" + std::to_string(d));
    }
  });

  // 7. Byte-identical reports for identical seeds.
  criterion(7, "determinism", [](Outcome& o) {
    const fs::path dir =
        fs::temp_directory_path() / ("qcest_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path a = dir / "a.json";
    const fs::path b = dir / "b.json";
    const std::string base =
        std::string(QCEST_CLI_PATH) + " verify-theorem --d 2 --n 1 --l 1..4 --seed 42 --out ";
    const int status_a = WEXITSTATUS(std::system((base + a.string()).c_str()));
    const int status_b = WEXITSTATUS(std::system((base + b.string()).c_str()));
    o.require(status_a == 0 && status_b == 0, "verify-theorem exited nonzero");
    std::ifstream in_a(a, std::ios::binary), in_b(b, std::ios::binary);
    std::stringstream sa, sb;
    sa << in_a.rdbuf();
    sb << in_b.rdbuf();
    o.require(!sa.str().empty() && sa.str() == sb.str(), "reports differ between runs");
    fs::remove_all(dir);
  });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
