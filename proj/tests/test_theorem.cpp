#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "qcest/mc.hpp"
#include "qcest/theorem.hpp"
#include "oracles.hpp"

using namespace qcest;

namespace {

// Design-grade POVMs (weights solved at moment order L+1) make the
// measure-and-prepare channel exactly universal; built once per (d, L).
const Povm& design_povm(int d, int l) {
  static std::map<std::pair<int, int>, Povm> cache;
  const auto key = std::make_pair(d, l);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const std::uint64_t dim = sym_dimension(d, l + 1);
    const int count = static_cast<int>(4 * dim * dim);
    const std::uint64_t seed = 7000 + static_cast<std::uint64_t>(100 * d + l);
    Povm povm = build_covariant_povm(d, l, haar_frame(d, count, seed),
                                     PovmBuildOptions{.moment_order = l + 1});
    it = cache.emplace(key, std::move(povm)).first;
  }
  return it->second;
}

std::vector<PureState> probes(int d, std::uint64_t seed) { return haar_frame(d, 6, seed); }

}  // namespace

TEST_CASE("clone-then-estimate shrinking factors multiply for 1 -> 2 qubits") {
  const ConcatenationResult r = clone_then_estimate(2, 1, 2, design_povm(2, 2), probes(2, 801));
  CHECK(std::abs(r.eta_clone - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(r.eta_estimate - 0.5) < 1e-8);
  CHECK(std::abs(r.eta_total - 1.0 / 3.0) < 1e-8);
  CHECK(std::abs(r.eta_total - r.eta_clone * r.eta_estimate) < 1e-8);
  CHECK(std::abs(r.total_fidelity - 2.0 / 3.0) < 1e-8);
  CHECK(r.eta_total_spread < 1e-8);
}

TEST_CASE("the total fidelity is independent of the intermediate L") {
  const ConcatenationResult r = clone_then_estimate(2, 1, 3, design_povm(2, 3), probes(2, 809));
  CHECK(std::abs(r.eta_clone - 5.0 / 9.0) < 1e-12);
  CHECK(std::abs(r.eta_estimate - 3.0 / 5.0) < 1e-8);
  CHECK(std::abs(r.eta_total - 1.0 / 3.0) < 1e-8);
  CHECK(std::abs(r.total_fidelity - 2.0 / 3.0) < 1e-8);
}

TEST_CASE("cloning at L = N leaves only the estimation shrink") {
  const ConcatenationResult r = clone_then_estimate(2, 2, 2, design_povm(2, 2), probes(2, 811));
  CHECK(std::abs(r.eta_clone - 1.0) < 1e-12);
  CHECK(std::abs(r.eta_total - r.eta_estimate) < 1e-8);
}

TEST_CASE("multiplication law across the grid") {
  for (int d = 2; d <= 3; ++d) {
    for (int n = 1; n <= 2; ++n) {
      for (int l = n; l <= n + 2; ++l) {
        const ConcatenationResult r =
            clone_then_estimate(d, n, l, design_povm(d, l), probes(d, 821 + static_cast<std::uint64_t>(100 * d + 10 * n + l)));
        CHECK(std::abs(r.eta_total - r.eta_clone * r.eta_estimate) < 1e-8);
        CHECK(std::abs(r.total_fidelity - cloner_fidelity_asymptotic(d, n)) < 1e-8);
        CHECK(std::abs(r.total_fidelity - fidelity_from_eta(r.eta_total, d)) < 1e-8);
      }
    }
  }
}

TEST_CASE("limit check: closed forms collapse to (N+1)/(N+d)") {
  const LimitCheckReport r2 = limit_check(2, 1, {1, 2, 3, 4});
  for (const LimitCheckRow& row : r2.rows) {
    CHECK(std::abs(row.total_fidelity - 2.0 / 3.0) < 1e-8);
    CHECK(row.deviation < 1e-8);
  }
  const LimitCheckReport r3 = limit_check(3, 2, {2, 3});
  for (const LimitCheckRow& row : r3.rows) {
    CHECK(std::abs(row.total_fidelity - 3.0 / 5.0) < 1e-8);
  }
  CHECK(r3.asymptotic_gap < 1e-12);  // eta_e = 1 substitution is exact
}

TEST_CASE("estimate-then-prepare cannot beat the cloner") {
  const InequalityRecord r = estimate_then_prepare_as_cloner(2, 1, 2, design_povm(2, 1));
  CHECK(std::abs(r.lhs - 2.0 / 3.0) < 1e-9);
  CHECK(std::abs(r.rhs - 5.0 / 6.0) < 1e-12);
  CHECK(r.slack() >= -1e-9);

  SUBCASE("the slack vanishes as L grows") {
    const InequalityRecord far = estimate_then_prepare_as_cloner(2, 1, 1000000, design_povm(2, 1));
    CHECK(far.slack() >= -1e-9);
    CHECK(far.slack() < 1e-5);
  }
  SUBCASE("L = N bounds the estimation fidelity by one") {
    const InequalityRecord same = estimate_then_prepare_as_cloner(2, 1, 1, design_povm(2, 1));
    CHECK(same.lhs <= 1.0 + 1e-12);
    CHECK(std::abs(same.rhs - 1.0) < 1e-12);
  }
}

TEST_CASE("the sandwich closes: measured estimation equals the asymptotic cloner") {
  struct Case {
    int d, n;
    double expected;
    double tol;
  };
  const Case cases[] = {{2, 1, 2.0 / 3.0, 1e-9}, {3, 1, 0.5, 1e-9}, {2, 3, 0.8, 1e-8}};
  for (const Case& c : cases) {
    const InequalityRecord r = opposite_inequality(c.d, c.n, design_povm(c.d, c.n));
    CHECK(r.slack() >= -1e-9);
    CHECK(std::abs(r.lhs - c.expected) < 1e-12);
    CHECK(std::abs(r.rhs - c.expected) < c.tol);
    // Both directions together: Eq.-style equality within 1e-8.
    const InequalityRecord other = estimate_then_prepare_as_cloner(c.d, c.n, c.n + 6, design_povm(c.d, c.n));
    CHECK(other.slack() >= -1e-9);
    CHECK(std::abs(r.rhs - r.lhs) < 1e-8);
  }
}

TEST_CASE("the channel treats entangled symmetric inputs by linearity") {
  SUBCASE("cloner output for (2,1,2)") {
    const SymmetricState cloned =
        clone(SymmetricState::product(PureState::basis_state(2, 0), 1), 2);
    const ExtensionReport r = symmetric_input_extension(design_povm(2, 2), cloned);
    CHECK(std::abs(r.eta - 0.5) < 1e-12);
    CHECK(r.max_abs_deviation < 1e-8);
    // Same statement through the pseudo-mixture decomposition.
    const PseudoMixture pm = pseudo_mixture_decompose(cloned, haar_frame(2, 40, 829));
    const DensityOperator via_mixture = apply_pseudo_mixture_channel(pm, r.eta);
    const DensityOperator direct = apply_measure_prepare(design_povm(2, 2), cloned);
    CHECK(oracles::max_abs(via_mixture.matrix() - direct.matrix()) < 1e-8);
  }
  SUBCASE("product inputs reduce to the pure-state behavior") {
    SplitMix64 rng = substream(839, 0);
    const PureState psi = haar_random_state(2, rng);
    const ExtensionReport r =
        symmetric_input_extension(design_povm(2, 2), SymmetricState::product(psi, 2));
    CHECK(r.max_abs_deviation < 1e-8);
  }
  SUBCASE("the maximally mixed symmetric state is a fixed point") {
    const ExtensionReport r =
        symmetric_input_extension(design_povm(2, 2), SymmetricState::maximally_mixed(2, 2));
    CHECK(r.max_abs_deviation < 1e-8);
    const DensityOperator out =
        apply_measure_prepare(design_povm(2, 2), SymmetricState::maximally_mixed(2, 2));
    CHECK(oracles::max_abs(out.matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-8);
  }
  SUBCASE("a d=3 entangled input") {
    const SymmetricState cloned =
        clone(SymmetricState::product(PureState::basis_state(3, 1), 1), 2);
    const ExtensionReport r = symmetric_input_extension(design_povm(3, 2), cloned);
    CHECK(r.max_abs_deviation < 1e-8);
  }
}

TEST_CASE("argument shapes are validated") {
  CHECK_THROWS_AS(clone_then_estimate(2, 1, 3, design_povm(2, 2), probes(2, 841)),
                  std::invalid_argument);
  CHECK_THROWS_AS(opposite_inequality(3, 1, design_povm(2, 1)), std::invalid_argument);
  CHECK_THROWS_AS(estimate_then_prepare_as_cloner(2, 1, 0, design_povm(2, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(limit_check(2, 1, {}), std::invalid_argument);
}
