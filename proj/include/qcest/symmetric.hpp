#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qcest/qudit.hpp"

namespace qcest {

/// Guard for anything materialized in the full (C^d)^(tensor N) space.
inline constexpr std::uint64_t kFullSpaceGuard = 4096;

/// Copies per level, entries summing to the copy count N.
using Occupation = std::vector<int>;

std::uint64_t sym_dimension(int d, int copies);  // C(N+d-1, N)

/// Canonical occupation-number basis of the symmetric subspace of N qudits,
/// ordered by lexicographically decreasing occupation vectors, e.g. for
/// d=2, N=2: (2,0), (1,1), (0,2).
class SymmetricBasis {
 public:
  SymmetricBasis(int d, int copies);

  int d() const { return d_; }
  int copies() const { return copies_; }
  int size() const { return static_cast<int>(states_.size()); }
  const Occupation& occupation(int i) const { return states_[static_cast<std::size_t>(i)]; }
  const std::vector<Occupation>& occupations() const { return states_; }
  /// Index of an occupation vector, or -1 if it is not a basis element.
  int index_of(const Occupation& n) const;

  friend bool operator==(const SymmetricBasis& a, const SymmetricBasis& b) {
    return a.d_ == b.d_ && a.copies_ == b.copies_;
  }

 private:
  int d_;
  int copies_;
  std::vector<Occupation> states_;
  std::map<Occupation, int> index_;
};

/// Coordinates of |psi>^(tensor N) in the canonical symmetric basis:
/// the entry for occupation n is sqrt(multinomial(N; n)) prod_k psi_k^{n_k}.
Vector embed_product_state(const PureState& psi, int copies);

/// Density operator on the symmetric subspace of N qudits, stored in
/// canonical symmetric coordinates (D_sym x D_sym).
class SymmetricState {
 public:
  SymmetricState(SymmetricBasis basis, Matrix m);
  static SymmetricState pure(SymmetricBasis basis, const Vector& coords);
  static SymmetricState product(const PureState& psi, int copies);
  static SymmetricState maximally_mixed(int d, int copies);

  const SymmetricBasis& basis() const { return basis_; }
  int d() const { return basis_.d(); }
  int copies() const { return basis_.copies(); }
  int size() const { return basis_.size(); }
  const Matrix& matrix() const { return m_; }

 private:
  SymmetricBasis basis_;
  Matrix m_;
};

/// Isometry V from symmetric coordinates into the full d^N space; column i
/// is the i-th canonical basis state written out over computational basis
/// strings (subsystem 1 = most significant base-d digit).  Guarded by
/// kFullSpaceGuard.
RealMatrix symmetric_isometry(int d, int copies);

/// Orthogonal projector onto the symmetric subspace of the full d^N space
/// (equals the average of all N! permutation operators).  Guarded.
Matrix symmetrizer(int d, int copies);

/// Full-space representation V rho V^dagger of a symmetric state.  Guarded.
Matrix lift_to_full(const SymmetricState& rho);

/// Single-particle reduced density operator (partial trace over all but one
/// subsystem), computed in occupation coordinates.
DensityOperator reduce_single_particle(const SymmetricState& rho);

/// rho = sum_i alpha_i |psi_i><psi_i|^(tensor N) with real alpha_i summing
/// to 1 (weights may be negative).
struct PseudoMixture {
  struct Term {
    double alpha;
    PureState psi;
  };
  int copies = 0;
  std::vector<Term> terms;
  double residual = 0.0;  // Frobenius reconstruction error of the solve

  double weight_sum() const;
  double abs_weight_sum() const;
};

/// Decompose a symmetric state over a frame of pure states by constrained
/// least squares (sum alpha = 1 imposed via an augmented row).  The frame
/// must be large enough that the tensor-power projectors span the Hermitian
/// operators on the symmetric subspace; rank deficiency is reported as the
/// achieved residual, never silently padded.
PseudoMixture pseudo_mixture_decompose(const SymmetricState& rho,
                                       const std::vector<PureState>& frame,
                                       double tolerance = 1e-8);

/// Push a pseudo-mixture through the single-state affine map
/// psi -> eta |psi><psi| + (1-eta) I/d; by linearity the result is
/// eta rho_red + (1-eta) I/d with rho_red the single-particle reduction.
DensityOperator apply_pseudo_mixture_channel(const PseudoMixture& pm, double eta);

}  // namespace qcest
