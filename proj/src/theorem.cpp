#include "qcest/theorem.hpp"

#include <cmath>
#include <stdexcept>

namespace qcest {

ConcatenationResult clone_then_estimate(int d, int n_in, int l_clones, const Povm& povm_l,
                                        const std::vector<PureState>& probes) {
  if (povm_l.d() != d || povm_l.copies() != l_clones) {
    throw std::invalid_argument("clone_then_estimate: POVM does not act on (d, L)");
  }
  if (probes.size() < 5) throw std::invalid_argument("clone_then_estimate: needs >= 5 probes");

  ConcatenationResult result;
  result.d = d;
  result.n_in = n_in;
  result.l_clones = l_clones;
  result.eta_clone = cloner_shrinking_factor(ClonerSpec(d, n_in, l_clones));
  result.eta_estimate = measure_prepare_channel_eta(povm_l, probes).eta_mean;

  const GeneratorBasis basis(d);
  double eta_lo = 0.0, eta_hi = 0.0, eta_sum = 0.0, fid_sum = 0.0;
  bool first = true;
  for (const PureState& probe : probes) {
    const SymmetricState cloned = clone(SymmetricState::product(probe, n_in), l_clones);
    const DensityOperator output = apply_measure_prepare(povm_l, cloned);
    fid_sum += fidelity_pure(probe, output);

    const BlochVector in = bloch_from_density(DensityOperator::pure(probe), basis);
    const BlochVector out = bloch_from_density(output, basis);
    const double eta = in.coords.dot(out.coords) / in.coords.squaredNorm();
    eta_sum += eta;
    eta_lo = first ? eta : std::min(eta_lo, eta);
    eta_hi = first ? eta : std::max(eta_hi, eta);
    first = false;
  }
  result.eta_total = eta_sum / static_cast<double>(probes.size());
  result.eta_total_spread = eta_hi - eta_lo;
  result.total_fidelity = fid_sum / static_cast<double>(probes.size());
  return result;
}

LimitCheckReport limit_check(int d, int n_in, const std::vector<int>& l_values) {
  require_dimension(d);
  if (l_values.empty()) throw std::invalid_argument("limit_check: no L values");
  const double optimum = cloner_fidelity_asymptotic(d, n_in);

  LimitCheckReport report;
  for (int l : l_values) {
    const double eta_c = cloner_shrinking_factor(ClonerSpec(d, n_in, l));
    const double eta_e = static_cast<double>(l) / (l + d);
    LimitCheckRow row;
    row.l_clones = l;
    row.total_fidelity = fidelity_from_eta(eta_c * eta_e, d);
    row.deviation = std::abs(row.total_fidelity - optimum);
    report.rows.push_back(row);
  }
  // eta_e(L -> infinity) = 1: the formula collapses to the asymptotic cloner
  // fidelity.
  const double eta_c_inf = static_cast<double>(n_in) / (n_in + d);
  report.asymptotic_fidelity = fidelity_from_eta(eta_c_inf * 1.0, d);
  report.asymptotic_gap = std::abs(report.asymptotic_fidelity - optimum);
  return report;
}

InequalityRecord estimate_then_prepare_as_cloner(int d, int n_in, int l_clones,
                                                 const Povm& povm_n) {
  if (povm_n.d() != d || povm_n.copies() != n_in) {
    throw std::invalid_argument("estimate_then_prepare_as_cloner: POVM does not act on (d, N)");
  }
  if (l_clones < n_in) throw std::invalid_argument("estimate_then_prepare_as_cloner: L < N");
  // Preparing L copies of the candidate leaves each single-particle output
  // equal to |psi_mu><psi_mu|, so the single-particle fidelity of the
  // procedure is the POVM's average estimation fidelity, independent of L.
  InequalityRecord record;
  record.label = "estimate-then-prepare <= cloner(N,L)";
  record.lhs = average_fidelity_exact(povm_n);
  record.rhs = cloner_fidelity(ClonerSpec(d, n_in, l_clones));
  return record;
}

InequalityRecord opposite_inequality(int d, int n_in, const Povm& povm_n) {
  if (povm_n.d() != d || povm_n.copies() != n_in) {
    throw std::invalid_argument("opposite_inequality: POVM does not act on (d, N)");
  }
  InequalityRecord record;
  record.label = "cloner(N,inf) <= estimation";
  record.lhs = cloner_fidelity_asymptotic(d, n_in);
  record.rhs = average_fidelity_exact(povm_n);
  return record;
}

ExtensionReport symmetric_input_extension(const Povm& povm_l, const SymmetricState& input) {
  const int d = input.d();
  const int l = input.copies();
  const double eta = static_cast<double>(l) / (l + d);

  const DensityOperator output = apply_measure_prepare(povm_l, input);
  const DensityOperator reduced = reduce_single_particle(input);
  const Matrix expected =
      eta * reduced.matrix() + (1.0 - eta) / d * Matrix::Identity(d, d);

  ExtensionReport report;
  report.eta = eta;
  report.max_abs_deviation = (output.matrix() - expected).cwiseAbs().maxCoeff();
  return report;
}

}  // namespace qcest
