#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qcest/rng.hpp"

namespace qcest {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Deterministic linear algebra is held to 1e-12; eigenvalue positivity to
// 1e-10 (accumulation across compositions); Monte Carlo to 3 standard errors.
inline constexpr double kTolExact = 1e-12;
inline constexpr double kTolEigen = 1e-10;

void require_dimension(int d);  // throws std::invalid_argument unless d >= 2

std::uint64_t binomial(int n, int k);

/// Unit vector in C^d.
class PureState {
 public:
  explicit PureState(Vector amplitudes);       // requires unit norm within 1e-12
  static PureState normalized(Vector amplitudes);
  static PureState basis_state(int d, int level);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex amplitude(int k) const { return amps_(k); }

 private:
  Vector amps_;
};

/// d x d density operator: Hermitian, unit trace, spectrum >= -1e-10.
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m);
  static DensityOperator pure(const PureState& psi);
  static DensityOperator maximally_mixed(int d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

/// The d^2-1 traceless Hermitian generators of SU(d), normalized to
/// Tr(t_i t_j) = 2 delta_ij.  Canonical order: symmetric off-diagonal pairs
/// (j<k, lexicographic), antisymmetric pairs in the same order, then the
/// d-1 diagonal generators.  For d=2 this is exactly (sigma_x, sigma_y,
/// sigma_z).
class GeneratorBasis {
 public:
  explicit GeneratorBasis(int d);

  int dim() const { return d_; }
  std::size_t size() const { return gens_.size(); }
  const Matrix& operator[](std::size_t i) const { return gens_[i]; }
  const std::vector<Matrix>& generators() const { return gens_; }

 private:
  int d_;
  std::vector<Matrix> gens_;
};

/// Real coordinate vector of a density operator in a GeneratorBasis.
struct BlochVector {
  int d = 0;
  RealVector coords;

  double norm() const { return coords.norm(); }
};

/// Bloch length common to every pure state: sqrt(2(1 - 1/d)).
double pure_bloch_length(int d);

BlochVector bloch_from_density(const DensityOperator& rho, const GeneratorBasis& basis);
DensityOperator density_from_bloch(const BlochVector& lambda, const GeneratorBasis& basis);

/// eta |psi><psi| + (1-eta) I/d, for eta in [0, 1].
DensityOperator apply_shrink(const PureState& psi, double eta);

/// <psi| rho |psi>.
double fidelity_pure(const PureState& psi, const DensityOperator& rho);

/// F = (1/d)[1 + (d-1) eta] and its inverse.
double fidelity_from_eta(double eta, int d);
double eta_from_fidelity(double fidelity, int d);

/// Unitarily invariant random pure state (normalized complex Gaussians).
PureState haar_random_state(int d, SplitMix64& rng);

/// Closed-form Haar moment: integral over psi of |<phi|psi>|^(2k)
/// = 1 / C(k+d-1, k), independent of phi.
double overlap_moment(int d, int k);

}  // namespace qcest
