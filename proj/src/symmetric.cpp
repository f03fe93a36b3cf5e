#include "qcest/symmetric.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qcest {

namespace {

std::uint64_t checked_full_dim(int d, int copies) {
  std::uint64_t dim = 1;
  for (int i = 0; i < copies; ++i) {
    dim *= static_cast<std::uint64_t>(d);
    if (dim > kFullSpaceGuard) {
      std::ostringstream msg;
      msg << "full-space size d^N = " << d << "^" << copies << " exceeds guard "
          << kFullSpaceGuard;
      throw std::invalid_argument(msg.str());
    }
  }
  return dim;
}

double multinomial(int n, const Occupation& counts) {
  double result = 1.0;
  int remaining = n;
  for (int c : counts) {
    result *= static_cast<double>(binomial(remaining, c));
    remaining -= c;
  }
  return result;
}

void require_copies(int copies) {
  if (copies < 1) throw std::invalid_argument("copy count must be >= 1");
}

}  // namespace

std::uint64_t sym_dimension(int d, int copies) {
  require_dimension(d);
  if (copies < 0) throw std::invalid_argument("copy count must be >= 0");
  return binomial(copies + d - 1, copies);
}

SymmetricBasis::SymmetricBasis(int d, int copies) : d_(d), copies_(copies) {
  require_dimension(d);
  require_copies(copies);
  // Enumerate compositions of N into d parts in decreasing lexicographic
  // order, starting from (N, 0, ..., 0).
  Occupation n(static_cast<std::size_t>(d), 0);
  n[0] = copies;
  while (true) {
    states_.push_back(n);
    int pivot = -1;
    for (int i = d - 2; i >= 0; --i) {
      if (n[static_cast<std::size_t>(i)] > 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) break;
    const int tail = n[static_cast<std::size_t>(d) - 1];
    n[static_cast<std::size_t>(pivot)] -= 1;
    n[static_cast<std::size_t>(pivot) + 1] = tail + 1;
    for (std::size_t i = static_cast<std::size_t>(pivot) + 2; i < n.size(); ++i) n[i] = 0;
  }
  for (int i = 0; i < size(); ++i) index_[states_[static_cast<std::size_t>(i)]] = i;
}

int SymmetricBasis::index_of(const Occupation& n) const {
  auto it = index_.find(n);
  return it == index_.end() ? -1 : it->second;
}

Vector embed_product_state(const PureState& psi, int copies) {
  require_copies(copies);
  const SymmetricBasis basis(psi.dim(), copies);
  Vector coords(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const Occupation& n = basis.occupation(i);
    Complex amp = std::sqrt(multinomial(copies, n));
    for (int k = 0; k < psi.dim(); ++k) {
      for (int c = 0; c < n[static_cast<std::size_t>(k)]; ++c) amp *= psi.amplitude(k);
    }
    coords(i) = amp;
  }
  return coords;
}

SymmetricState::SymmetricState(SymmetricBasis basis, Matrix m)
    : basis_(std::move(basis)), m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() != basis_.size()) {
    throw std::invalid_argument("symmetric state matrix does not match basis size");
  }
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kTolExact) {
    throw std::invalid_argument("symmetric state is not Hermitian");
  }
  if (std::abs(m_.trace().real() - 1.0) > kTolExact) {
    throw std::invalid_argument("symmetric state trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kTolEigen) {
    throw std::invalid_argument("symmetric state has an eigenvalue below -1e-10");
  }
}

SymmetricState SymmetricState::pure(SymmetricBasis basis, const Vector& coords) {
  if (coords.size() != basis.size()) {
    throw std::invalid_argument("coordinate vector does not match basis size");
  }
  Matrix m = coords * coords.adjoint();
  return SymmetricState(std::move(basis), std::move(m));
}

SymmetricState SymmetricState::product(const PureState& psi, int copies) {
  return pure(SymmetricBasis(psi.dim(), copies), embed_product_state(psi, copies));
}

SymmetricState SymmetricState::maximally_mixed(int d, int copies) {
  SymmetricBasis basis(d, copies);
  const int dim = basis.size();
  return SymmetricState(std::move(basis), Matrix::Identity(dim, dim) / dim);
}

RealMatrix symmetric_isometry(int d, int copies) {
  const std::uint64_t full = checked_full_dim(d, copies);
  const SymmetricBasis basis(d, copies);
  RealMatrix v = RealMatrix::Zero(static_cast<Eigen::Index>(full), basis.size());
  Occupation n(static_cast<std::size_t>(d), 0);
  for (std::uint64_t x = 0; x < full; ++x) {
    std::uint64_t rest = x;
    std::fill(n.begin(), n.end(), 0);
    for (int s = 0; s < copies; ++s) {
      n[static_cast<std::size_t>(rest % static_cast<std::uint64_t>(d))] += 1;
      rest /= static_cast<std::uint64_t>(d);
    }
    const int i = basis.index_of(n);
    v(static_cast<Eigen::Index>(x), i) = 1.0 / std::sqrt(multinomial(copies, n));
  }
  return v;
}

Matrix symmetrizer(int d, int copies) {
  require_copies(copies);
  const RealMatrix v = symmetric_isometry(d, copies);
  return (v * v.transpose()).cast<Complex>();
}

Matrix lift_to_full(const SymmetricState& rho) {
  const RealMatrix v = symmetric_isometry(rho.d(), rho.copies());
  return v * rho.matrix() * v.transpose();
}

DensityOperator reduce_single_particle(const SymmetricState& rho) {
  const SymmetricBasis& basis = rho.basis();
  const int d = rho.d();
  const int copies = rho.copies();
  Matrix reduced = Matrix::Zero(d, d);
  Occupation m;
  for (int i = 0; i < basis.size(); ++i) {
    const Occupation& n = basis.occupation(i);
    for (int a = 0; a < d; ++a) {
      if (n[static_cast<std::size_t>(a)] == 0) continue;
      for (int b = 0; b < d; ++b) {
        m = n;
        m[static_cast<std::size_t>(a)] -= 1;
        m[static_cast<std::size_t>(b)] += 1;
        const int j = basis.index_of(m);
        const double ladder = std::sqrt(static_cast<double>(n[static_cast<std::size_t>(a)]) *
                                        m[static_cast<std::size_t>(b)]);
        reduced(a, b) += ladder * rho.matrix()(i, j);
      }
    }
  }
  reduced /= static_cast<double>(copies);
  return DensityOperator(std::move(reduced));
}

double PseudoMixture::weight_sum() const {
  double s = 0.0;
  for (const Term& t : terms) s += t.alpha;
  return s;
}

double PseudoMixture::abs_weight_sum() const {
  double s = 0.0;
  for (const Term& t : terms) s += std::abs(t.alpha);
  return s;
}

namespace {

// Orthonormal real coordinates of a Hermitian D x D matrix: diagonal, then
// sqrt(2) Re / sqrt(2) Im of the upper triangle.  Frobenius-isometric.
RealVector vec_hermitian(const Matrix& m) {
  const Eigen::Index dim = m.rows();
  RealVector v(dim * dim);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < dim; ++i) v(at++) = m(i, i).real();
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      v(at++) = root2 * m(i, j).real();
      v(at++) = root2 * m(i, j).imag();
    }
  }
  return v;
}

}  // namespace

PseudoMixture pseudo_mixture_decompose(const SymmetricState& rho,
                                       const std::vector<PureState>& frame,
                                       double tolerance) {
  const int dim = rho.size();
  const int copies = rho.copies();
  if (frame.empty()) throw std::invalid_argument("pseudo_mixture_decompose: empty frame");
  for (const PureState& psi : frame) {
    if (psi.dim() != rho.d()) {
      throw std::invalid_argument("pseudo_mixture_decompose: frame dimension mismatch");
    }
  }
  const Eigen::Index m = static_cast<Eigen::Index>(frame.size());
  const Eigen::Index rows = static_cast<Eigen::Index>(dim) * dim;

  std::vector<Vector> embedded;
  embedded.reserve(frame.size());
  RealMatrix a(rows + 1, m);
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    embedded.push_back(embed_product_state(frame[static_cast<std::size_t>(mu)], copies));
    const Matrix projector = embedded.back() * embedded.back().adjoint();
    a.col(mu).head(rows) = vec_hermitian(projector);
    a(rows, mu) = 1.0;  // augmented row: sum alpha = 1
  }
  RealVector b(rows + 1);
  b.head(rows) = vec_hermitian(rho.matrix());
  b(rows) = 1.0;

  const RealVector alpha = a.completeOrthogonalDecomposition().solve(b);

  Matrix reconstruction = Matrix::Zero(dim, dim);
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    reconstruction += alpha(mu) * (embedded[static_cast<std::size_t>(mu)] *
                                   embedded[static_cast<std::size_t>(mu)].adjoint());
  }
  const double residual = (reconstruction - rho.matrix()).norm();
  if (residual > tolerance) {
    std::ostringstream msg;
    msg << "pseudo_mixture_decompose: frame does not span the target (residual " << residual
        << " > " << tolerance << "); enlarge the frame";
    throw std::runtime_error(msg.str());
  }

  PseudoMixture pm;
  pm.copies = copies;
  pm.residual = residual;
  pm.terms.reserve(frame.size());
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    pm.terms.push_back({alpha(mu), frame[static_cast<std::size_t>(mu)]});
  }
  return pm;
}

DensityOperator apply_pseudo_mixture_channel(const PseudoMixture& pm, double eta) {
  if (pm.terms.empty()) throw std::invalid_argument("empty pseudo-mixture");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("shrinking factor outside [0, 1]");
  const int d = pm.terms.front().psi.dim();
  Matrix out = Matrix::Zero(d, d);
  for (const PseudoMixture::Term& t : pm.terms) {
    out += t.alpha * (eta * (t.psi.amplitudes() * t.psi.amplitudes().adjoint()) +
                      (1.0 - eta) / d * Matrix::Identity(d, d));
  }
  return DensityOperator(std::move(out));
}

}  // namespace qcest
