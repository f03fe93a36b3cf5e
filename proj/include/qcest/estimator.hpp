#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcest/symmetric.hpp"

namespace qcest {

/// One POVM outcome: the candidate state announced on that outcome and its
/// nonnegative weight c_mu; the element is c_mu times the projector onto
/// |psi_mu>^(tensor N) in symmetric coordinates.
struct FramePoint {
  PureState candidate;
  double weight = 0.0;
};

/// Finite covariant POVM on the symmetric subspace of N qudits.
class Povm {
 public:
  Povm(int d, int copies, std::vector<FramePoint> points);

  int d() const { return d_; }
  int copies() const { return copies_; }
  int size() const { return static_cast<int>(points_.size()); }
  const FramePoint& point(int mu) const { return points_[static_cast<std::size_t>(mu)]; }
  const std::vector<FramePoint>& points() const { return points_; }
  double weight(int mu) const { return points_[static_cast<std::size_t>(mu)].weight; }
  const PureState& candidate(int mu) const {
    return points_[static_cast<std::size_t>(mu)].candidate;
  }
  /// Symmetric coordinates of |psi_mu>^(tensor N).
  const Vector& embedded(int mu) const { return embedded_[static_cast<std::size_t>(mu)]; }
  double weight_sum() const;

  /// sum_mu c_mu |v_mu><v_mu| on the symmetric subspace.
  Matrix completeness_matrix() const;

 private:
  int d_;
  int copies_;
  std::vector<FramePoint> points_;
  std::vector<Vector> embedded_;
};

struct PovmBuildOptions {
  /// Moment order targeted by the weight solve.  0 means the copy count N
  /// (plain completeness, sum_mu E_mu = identity on Sym_N).  Solving at
  /// order N+1 additionally makes the measure-and-prepare channel exactly
  /// universal; completeness then follows by partial trace.
  int moment_order = 0;
  double tolerance = 1e-8;
};

/// Solve for nonnegative weights over a frame of candidate states so the
/// weighted tensor-power projectors resolve the identity on the symmetric
/// subspace.  Throws std::runtime_error with the achieved residual if the
/// frame cannot reach the tolerance (enlarge the frame and retry).
Povm build_covariant_povm(int d, int copies, const std::vector<PureState>& frame,
                          const PovmBuildOptions& options = {});

struct PovmDiagnostics {
  double completeness_residual = 0.0;  // Frobenius norm of sum E_mu - I
  double min_weight = 0.0;             // PSD margin of the elements
  double weight_sum = 0.0;             // equals D_sym(d, N) for a complete POVM
  double expected_weight_sum = 0.0;
  bool pass = false;
};

PovmDiagnostics validate_povm(const Povm& povm, double tolerance = 1e-8);

/// Frobenius deviation of sum_mu c_mu P_mu^(order) from (sum c / D_order) I
/// on Sym_order; ~0 certifies pointwise universality of the induced
/// measure-and-prepare channel when order = N+1.
double moment_resolution_residual(const Povm& povm, int order);

/// p_mu = c_mu |<psi_mu|psi>|^(2N) over outcomes, in frame order.
RealVector outcome_distribution(const Povm& povm, const PureState& psi);

/// Draw an outcome index by cumulative-sum inversion in frame order.
int sample_outcome(const Povm& povm, const PureState& psi, SplitMix64& rng);

/// sum_mu p_mu(psi) |<psi|psi_mu>|^2, evaluated in closed form.
double estimation_fidelity_exact(const Povm& povm, const PureState& psi);

/// Haar-average fidelity via the closed-form moment:
/// sum_mu c_mu / C(N+d, N+1); equals (N+1)/(N+d) for any complete POVM.
double average_fidelity_exact(const Povm& povm);

/// Exact measure-and-prepare output sum_mu p_mu(psi) |psi_mu><psi_mu|;
/// `preparations`, when given, overrides the prepared state per outcome.
DensityOperator measure_prepare_average(
    const Povm& povm, const PureState& psi,
    const std::vector<DensityOperator>* preparations = nullptr);

/// The same channel applied to an arbitrary symmetric-subspace state:
/// sum_mu tr(E_mu rho) |psi_mu><psi_mu|.
DensityOperator apply_measure_prepare(const Povm& povm, const SymmetricState& rho);

/// Fitted Bloch shrinking factor of a simulated channel across probe inputs.
struct ShrinkReport {
  double eta_mean = 0.0;
  double eta_spread = 0.0;  // max - min over probes
  int probes = 0;
};

/// Fit eta per probe as the ratio of output to input Bloch vectors (least
/// squares along the input direction) of the exact measure-and-prepare
/// channel.  Requires at least 5 probes.
ShrinkReport measure_prepare_channel_eta(
    const Povm& povm, const std::vector<PureState>& probes,
    const std::vector<DensityOperator>* preparations = nullptr);

/// Sampled variant: the preparation average over `samples` simulated
/// outcomes per probe replaces the exact average.
ShrinkReport measure_prepare_channel_eta_sampled(const Povm& povm,
                                                 const std::vector<PureState>& probes,
                                                 std::uint64_t samples, std::uint64_t seed);

/// Haar-random frame of `count` candidate states (substreams of `seed`).
std::vector<PureState> haar_frame(int d, int count, std::uint64_t seed);

/// The six eigenstates of the qubit Pauli operators (z, x, y order); an
/// exact weighted 2-design with uniform weights 1/3.
std::vector<PureState> pauli_eigenstate_frame();

/// Four tetrahedral qubit states; an exact 2-design with uniform weights 1/2.
std::vector<PureState> tetrahedron_frame();

}  // namespace qcest
