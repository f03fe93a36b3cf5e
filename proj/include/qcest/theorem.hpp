#pragma once

#include <string>
#include <vector>

#include "qcest/cloner.hpp"
#include "qcest/estimator.hpp"

namespace qcest {

/// Outcome of cloning N -> L and estimating on the L clones.
struct ConcatenationResult {
  int d = 0;
  int n_in = 0;
  int l_clones = 0;
  double eta_clone = 0.0;      // closed-form cloner shrinking factor
  double eta_estimate = 0.0;   // fitted from the measure-and-prepare channel
  double eta_total = 0.0;      // fitted from the full concatenation
  double eta_total_spread = 0.0;
  double total_fidelity = 0.0;  // mean <psi| output |psi> over probes
};

/// lhs <= rhs record for one of the two theorem inequalities.
struct InequalityRecord {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;

  double slack() const { return rhs - lhs; }
};

/// Embed each probe as N copies, clone to L, apply the exact
/// measure-and-prepare channel of povm_l, and fit the concatenated
/// shrinking factor.  povm_l must act on L copies.
ConcatenationResult clone_then_estimate(int d, int n_in, int l_clones, const Povm& povm_l,
                                        const std::vector<PureState>& probes);

struct LimitCheckRow {
  int l_clones = 0;
  double total_fidelity = 0.0;  // (1/d)[1 + (d-1) eta_c(N,L) eta_e(L)]
  double deviation = 0.0;       // from (N+1)/(N+d)
};

struct LimitCheckReport {
  std::vector<LimitCheckRow> rows;
  double asymptotic_fidelity = 0.0;  // eta_e = 1 substituted into the formula
  double asymptotic_gap = 0.0;       // |asymptotic_fidelity - (N+1)/(N+d)|
};

/// Closed-form check that the concatenation fidelity is L-independent and
/// that substituting a unit estimation shrinking factor reproduces the
/// asymptotic cloner fidelity.
LimitCheckReport limit_check(int d, int n_in, const std::vector<int>& l_values);

/// Estimate on N copies, then prepare L copies of the announced candidate:
/// the single-particle fidelity of this procedure is the POVM's average
/// estimation fidelity and cannot beat the optimal N -> L cloner.
InequalityRecord estimate_then_prepare_as_cloner(int d, int n_in, int l_clones,
                                                 const Povm& povm_n);

/// The opposite direction: the asymptotic cloner fidelity cannot beat the
/// measured average fidelity of a complete POVM on N copies.
InequalityRecord opposite_inequality(int d, int n_in, const Povm& povm_n);

struct ExtensionReport {
  double eta = 0.0;                // fitted on pure products, reused here
  double max_abs_deviation = 0.0;  // output vs eta rho_red + (1-eta) I/d
};

/// Apply the measure-and-prepare channel to an entangled symmetric-subspace
/// input and compare against the shrink of its single-particle reduction.
ExtensionReport symmetric_input_extension(const Povm& povm_l, const SymmetricState& input);

}  // namespace qcest
