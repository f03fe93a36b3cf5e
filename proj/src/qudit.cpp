#include "qcest/qudit.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qcest {

void require_dimension(int d) {
  if (d < 2) {
    std::ostringstream msg;
    msg << "Hilbert-space dimension must be >= 2, got " << d;
    throw std::invalid_argument(msg.str());
  }
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  require_dimension(static_cast<int>(amps_.size()));
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kTolExact) {
    std::ostringstream msg;
    msg << "pure state is not normalized: |psi| = " << norm;
    throw std::invalid_argument(msg.str());
  }
}

PureState PureState::normalized(Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return PureState(amplitudes / norm);
}

PureState PureState::basis_state(int d, int level) {
  require_dimension(d);
  if (level < 0 || level >= d) throw std::invalid_argument("basis level out of range");
  Vector v = Vector::Zero(d);
  v(level) = 1.0;
  return PureState(std::move(v));
}

DensityOperator::DensityOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("density operator must be square");
  require_dimension(static_cast<int>(m_.rows()));
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kTolExact) {
    throw std::invalid_argument("density operator is not Hermitian");
  }
  const double trace = m_.trace().real();
  if (std::abs(trace - 1.0) > kTolExact) {
    std::ostringstream msg;
    msg << "density operator trace is " << trace << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m_, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -kTolEigen) {
    std::ostringstream msg;
    msg << "density operator has eigenvalue " << min_eig << " below -1e-10";
    throw std::invalid_argument(msg.str());
  }
}

DensityOperator DensityOperator::pure(const PureState& psi) {
  return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int d) {
  require_dimension(d);
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
}

GeneratorBasis::GeneratorBasis(int d) : d_(d) {
  require_dimension(d);
  gens_.reserve(static_cast<std::size_t>(d) * d - 1);
  // Symmetric off-diagonal: E_jk + E_kj.
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix t = Matrix::Zero(d, d);
      t(j, k) = 1.0;
      t(k, j) = 1.0;
      gens_.push_back(std::move(t));
    }
  }
  // Antisymmetric off-diagonal: -i E_jk + i E_kj.
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix t = Matrix::Zero(d, d);
      t(j, k) = Complex(0.0, -1.0);
      t(k, j) = Complex(0.0, 1.0);
      gens_.push_back(std::move(t));
    }
  }
  // Diagonal: sqrt(2/(l(l+1))) (sum_{m<l} E_mm - l E_ll).
  for (int l = 1; l < d; ++l) {
    Matrix t = Matrix::Zero(d, d);
    const double scale = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int m = 0; m < l; ++m) t(m, m) = scale;
    t(l, l) = -scale * l;
    gens_.push_back(std::move(t));
  }
}

double pure_bloch_length(int d) {
  require_dimension(d);
  return std::sqrt(2.0 * (1.0 - 1.0 / d));
}

BlochVector bloch_from_density(const DensityOperator& rho, const GeneratorBasis& basis) {
  if (rho.dim() != basis.dim()) {
    throw std::invalid_argument("bloch_from_density: dimension mismatch between state and basis");
  }
  const std::size_t n = basis.size();
  RealVector coords(n);
  for (std::size_t i = 0; i < n; ++i) {
    coords(static_cast<Eigen::Index>(i)) = (rho.matrix() * basis[i]).trace().real();
  }
  return BlochVector{basis.dim(), std::move(coords)};
}

DensityOperator density_from_bloch(const BlochVector& lambda, const GeneratorBasis& basis) {
  const int d = basis.dim();
  if (lambda.d != d) {
    throw std::invalid_argument("density_from_bloch: dimension mismatch between vector and basis");
  }
  if (lambda.coords.size() != static_cast<Eigen::Index>(basis.size())) {
    throw std::invalid_argument("density_from_bloch: coordinate count mismatch");
  }
  Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    m += 0.5 * lambda.coords(static_cast<Eigen::Index>(i)) * basis[i];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -kTolEigen) {
    std::ostringstream msg;
    msg << "density_from_bloch: result has eigenvalue " << min_eig
        << "; the coordinate vector lies outside the state space";
    throw std::runtime_error(msg.str());
  }
  return DensityOperator(std::move(m));
}

DensityOperator apply_shrink(const PureState& psi, double eta) {
  if (eta < 0.0 || eta > 1.0) {
    std::ostringstream msg;
    msg << "shrinking factor " << eta << " outside [0, 1]";
    throw std::invalid_argument(msg.str());
  }
  const int d = psi.dim();
  Matrix m = eta * (psi.amplitudes() * psi.amplitudes().adjoint());
  m += (1.0 - eta) / d * Matrix::Identity(d, d);
  return DensityOperator(std::move(m));
}

double fidelity_pure(const PureState& psi, const DensityOperator& rho) {
  if (psi.dim() != rho.dim()) {
    throw std::invalid_argument("fidelity_pure: dimension mismatch");
  }
  return (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
}

double fidelity_from_eta(double eta, int d) {
  require_dimension(d);
  return (1.0 + (d - 1) * eta) / d;
}

double eta_from_fidelity(double fidelity, int d) {
  require_dimension(d);
  return (d * fidelity - 1.0) / (d - 1);
}

PureState haar_random_state(int d, SplitMix64& rng) {
  require_dimension(d);
  Vector v(d);
  for (int k = 0; k < d; ++k) {
    const double re = gaussian(rng);
    const double im = gaussian(rng);
    v(k) = Complex(re, im);
  }
  return PureState::normalized(std::move(v));
}

double overlap_moment(int d, int k) {
  require_dimension(d);
  if (k < 0) throw std::invalid_argument("overlap_moment: k must be >= 0");
  return 1.0 / static_cast<double>(binomial(k + d - 1, k));
}

}  // namespace qcest
