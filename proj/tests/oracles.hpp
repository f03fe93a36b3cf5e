// Test-only reference implementations: brute-force full-space constructions
// kept independent of the library's computational paths.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qcest/cloner.hpp"
#include "qcest/symmetric.hpp"

namespace oracles {

using qcest::Complex;
using qcest::Matrix;
using qcest::Vector;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// |psi>^(tensor n) over the full d^n computational basis, subsystem 1 in
/// the most significant base-d digit.
inline Vector tensor_power(const qcest::PureState& psi, int n) {
  Vector v = psi.amplitudes();
  for (int i = 1; i < n; ++i) {
    Vector next(v.size() * psi.dim());
    for (Eigen::Index a = 0; a < v.size(); ++a) {
      for (int b = 0; b < psi.dim(); ++b) next(a * psi.dim() + b) = v(a) * psi.amplitude(b);
    }
    v = std::move(next);
  }
  return v;
}

/// Average of all n! permutation operators on (C^d)^(tensor n), built
/// literally from the group elements.
inline Matrix permutation_average(int d, int n) {
  std::int64_t full = 1;
  for (int i = 0; i < n; ++i) full *= d;
  std::int64_t n_fact = 1;
  for (int i = 2; i <= n; ++i) n_fact *= i;

  Matrix s = Matrix::Zero(full, full);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> digits(static_cast<std::size_t>(n));
  do {
    for (std::int64_t x = 0; x < full; ++x) {
      std::int64_t rest = x;
      for (int slot = n - 1; slot >= 0; --slot) {
        digits[static_cast<std::size_t>(slot)] = static_cast<int>(rest % d);
        rest /= d;
      }
      std::int64_t y = 0;
      for (int slot = 0; slot < n; ++slot) {
        y = y * d + digits[static_cast<std::size_t>(perm[static_cast<std::size_t>(slot)])];
      }
      s(y, x) += 1.0 / static_cast<double>(n_fact);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s;
}

/// Partial trace of a full-space operator down to the subsystem at `keep`
/// (0-based, subsystem 0 in the most significant digit).
inline Matrix partial_trace_keep(const Matrix& rho, int d, int n, int keep) {
  std::int64_t left = 1;
  for (int i = 0; i < keep; ++i) left *= d;
  std::int64_t right = 1;
  for (int i = keep + 1; i < n; ++i) right *= d;

  Matrix out = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Complex sum = 0.0;
      for (std::int64_t l = 0; l < left; ++l) {
        for (std::int64_t r = 0; r < right; ++r) {
          const std::int64_t row = (l * d + a) * right + r;
          const std::int64_t col = (l * d + b) * right + r;
          sum += rho(row, col);
        }
      }
      out(a, b) = sum;
    }
  }
  return out;
}

/// Werner channel evaluated with dense full-space matrices:
/// (D_N/D_M) S_M (rho ⊗ I) S_M in symmetric coordinates, *not* renormalized,
/// so trace preservation of the analytic prefactor is visible to tests.
inline Matrix dense_clone(const qcest::SymmetricState& input, int m_out) {
  const int d = input.d();
  const int n = input.copies();
  const Matrix rho_full = qcest::lift_to_full(input);
  std::int64_t extra = 1;
  for (int i = 0; i < m_out - n; ++i) extra *= d;
  const Matrix padded = kron(rho_full, Matrix::Identity(extra, extra));
  const Matrix s = qcest::symmetrizer(d, m_out);
  Matrix out = s * padded * s;
  out *= static_cast<double>(qcest::sym_dimension(d, n)) /
         static_cast<double>(qcest::sym_dimension(d, m_out));
  const qcest::RealMatrix v = qcest::symmetric_isometry(d, m_out);
  return v.transpose() * out * v;
}

/// Ginibre random density operator.
inline qcest::DensityOperator random_density(int d, qcest::SplitMix64& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = Complex(qcest::gaussian(rng), qcest::gaussian(rng));
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return qcest::DensityOperator(std::move(rho));
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracles
