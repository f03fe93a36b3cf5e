#pragma once

#include "qcest/symmetric.hpp"

namespace qcest {

/// Parameters of an N -> M universal cloning channel for qudits.
struct ClonerSpec {
  int d = 2;
  int n_in = 1;
  int m_out = 1;

  ClonerSpec(int d_, int n_, int m_);  // requires d >= 2 and 1 <= N <= M
};

/// Single-particle output fidelity of the optimal universal cloner:
/// (M - N + N(M+d)) / (M(N+d)).
double cloner_fidelity(const ClonerSpec& spec);

/// Limit of the cloner fidelity for M -> infinity: (N+1)/(N+d).
double cloner_fidelity_asymptotic(int d, int copies);

/// Bloch shrinking factor of the cloner, N(M+d)/(M(N+d)); equals
/// (d F - 1)/(d - 1) with F the cloner fidelity.
double cloner_shrinking_factor(const ClonerSpec& spec);

/// Optimal universal cloning channel: project rho (tensor) identity onto the
/// symmetric subspace of M copies, scaled by D_sym(N)/D_sym(M) and
/// renormalized to unit trace.  Computed in the full d^M space (guarded by
/// kFullSpaceGuard) without materializing the d^M x d^M intermediate.
SymmetricState clone(const SymmetricState& input, int m_out);

/// Same channel evaluated purely in occupation coordinates; agrees with
/// clone() to 1e-10 and never touches the full space.
SymmetricState clone_occupation(const SymmetricState& input, int m_out);

}  // namespace qcest
