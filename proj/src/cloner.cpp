#include "qcest/cloner.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qcest {

ClonerSpec::ClonerSpec(int d_, int n_, int m_) : d(d_), n_in(n_), m_out(m_) {
  require_dimension(d);
  if (n_in < 1 || m_out < n_in) {
    std::ostringstream msg;
    msg << "cloner requires 1 <= N <= M, got N=" << n_in << " M=" << m_out;
    throw std::invalid_argument(msg.str());
  }
}

double cloner_fidelity(const ClonerSpec& spec) {
  const double n = spec.n_in, m = spec.m_out, d = spec.d;
  return (m - n + n * (m + d)) / (m * (n + d));
}

double cloner_fidelity_asymptotic(int d, int copies) {
  require_dimension(d);
  if (copies < 1) throw std::invalid_argument("copy count must be >= 1");
  return (copies + 1.0) / (copies + d);
}

double cloner_shrinking_factor(const ClonerSpec& spec) {
  const double n = spec.n_in, m = spec.m_out, d = spec.d;
  return n * (m + d) / (m * (n + d));
}

SymmetricState clone(const SymmetricState& input, int m_out) {
  const int d = input.d();
  const int n_in = input.copies();
  const ClonerSpec spec(d, n_in, m_out);
  if (m_out == n_in) return input;

  // Output in symmetric coordinates is V_M^T (rho_full ⊗ I_K) V_M with
  // K = d^(M-N); slicing V_M by the ancilla index j turns the Kronecker
  // factor into a sum of small congruences.
  const RealMatrix v_m = symmetric_isometry(d, m_out);  // applies the guard
  const RealMatrix v_n = symmetric_isometry(d, n_in);
  const Matrix rho_full = v_n * input.matrix() * v_n.transpose();

  const Eigen::Index dim_n = rho_full.rows();
  Eigen::Index ancilla = 1;
  for (int i = 0; i < m_out - n_in; ++i) ancilla *= d;

  const Eigen::Index dim_sym = v_m.cols();
  Matrix out = Matrix::Zero(dim_sym, dim_sym);
  RealMatrix slice(dim_n, dim_sym);
  for (Eigen::Index j = 0; j < ancilla; ++j) {
    for (Eigen::Index r = 0; r < dim_n; ++r) slice.row(r) = v_m.row(r * ancilla + j);
    out += slice.transpose() * rho_full * slice;
  }

  out *= static_cast<double>(sym_dimension(d, n_in)) / sym_dimension(d, m_out);
  out /= out.trace().real();
  out = 0.5 * (out + out.adjoint().eval());
  return SymmetricState(SymmetricBasis(d, m_out), std::move(out));
}

namespace {

double log_multinomial(int n, const Occupation& counts) {
  double s = std::lgamma(n + 1.0);
  for (int c : counts) s -= std::lgamma(c + 1.0);
  return s;
}

}  // namespace

SymmetricState clone_occupation(const SymmetricState& input, int m_out) {
  const int d = input.d();
  const int n_in = input.copies();
  const ClonerSpec spec(d, n_in, m_out);
  if (m_out == n_in) return input;

  const SymmetricBasis& basis_n = input.basis();
  const SymmetricBasis basis_m(d, m_out);
  const int extra = m_out - n_in;

  // Splitting coefficient c(n, p) = sqrt(mult(N;n) mult(M-N;p-n) / mult(M;p))
  // of <n| ⊗ I applied to |p>; the channel couples (p, q) through pairs
  // (n, n') with p - n = q - n'.
  const int dim_m = basis_m.size();
  const int dim_n = basis_n.size();
  std::vector<std::vector<std::pair<int, double>>> splits(static_cast<std::size_t>(dim_m));
  Occupation diff(static_cast<std::size_t>(d), 0);
  for (int p = 0; p < dim_m; ++p) {
    const Occupation& occ_p = basis_m.occupation(p);
    const double log_mult_p = log_multinomial(m_out, occ_p);
    for (int i = 0; i < dim_n; ++i) {
      const Occupation& occ_n = basis_n.occupation(i);
      bool feasible = true;
      for (int k = 0; k < d; ++k) {
        diff[static_cast<std::size_t>(k)] =
            occ_p[static_cast<std::size_t>(k)] - occ_n[static_cast<std::size_t>(k)];
        if (diff[static_cast<std::size_t>(k)] < 0) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      const double coeff = std::exp(
          0.5 * (log_multinomial(n_in, occ_n) + log_multinomial(extra, diff) - log_mult_p));
      splits[static_cast<std::size_t>(p)].push_back({i, coeff});
    }
  }

  const SymmetricBasis basis_extra(d, extra);
  Matrix out = Matrix::Zero(dim_m, dim_m);
  for (int p = 0; p < dim_m; ++p) {
    const Occupation& occ_p = basis_m.occupation(p);
    for (const auto& [i, ci] : splits[static_cast<std::size_t>(p)]) {
      const Occupation& occ_n = basis_n.occupation(i);
      for (int k = 0; k < d; ++k) {
        diff[static_cast<std::size_t>(k)] =
            occ_p[static_cast<std::size_t>(k)] - occ_n[static_cast<std::size_t>(k)];
      }
      // q runs over occupations reachable as diff + n' for basis elements n'.
      for (int ip = 0; ip < dim_n; ++ip) {
        const Occupation& occ_np = basis_n.occupation(ip);
        Occupation occ_q = diff;
        for (int k = 0; k < d; ++k) occ_q[static_cast<std::size_t>(k)] += occ_np[static_cast<std::size_t>(k)];
        const int q = basis_m.index_of(occ_q);
        const double log_mult_q = log_multinomial(m_out, occ_q);
        const double cq = std::exp(0.5 * (log_multinomial(n_in, occ_np) +
                                          log_multinomial(extra, diff) - log_mult_q));
        out(p, q) += ci * cq * input.matrix()(i, ip);
      }
    }
  }

  out *= static_cast<double>(sym_dimension(d, n_in)) / sym_dimension(d, m_out);
  out /= out.trace().real();
  out = 0.5 * (out + out.adjoint().eval());
  return SymmetricState(basis_m, std::move(out));
}

}  // namespace qcest
