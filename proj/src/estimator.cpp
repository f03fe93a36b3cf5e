#include "qcest/estimator.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "weights.hpp"

namespace qcest {

namespace {

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

Povm::Povm(int d, int copies, std::vector<FramePoint> points)
    : d_(d), copies_(copies), points_(std::move(points)) {
  require_dimension(d);
  if (copies_ < 1) throw std::invalid_argument("POVM copy count must be >= 1");
  if (points_.empty()) throw std::invalid_argument("POVM needs at least one outcome");
  embedded_.reserve(points_.size());
  for (const FramePoint& p : points_) {
    if (p.candidate.dim() != d_) {
      throw std::invalid_argument("POVM candidate dimension mismatch");
    }
    if (!std::isfinite(p.weight)) throw std::invalid_argument("POVM weight is not finite");
    embedded_.push_back(embed_product_state(p.candidate, copies_));
  }
}

double Povm::weight_sum() const {
  double s = 0.0;
  for (const FramePoint& p : points_) s += p.weight;
  return s;
}

Matrix Povm::completeness_matrix() const {
  const Eigen::Index dim = embedded_.front().size();
  Matrix c = Matrix::Zero(dim, dim);
  for (std::size_t mu = 0; mu < points_.size(); ++mu) {
    c += points_[mu].weight * (embedded_[mu] * embedded_[mu].adjoint());
  }
  return c;
}

Povm build_covariant_povm(int d, int copies, const std::vector<PureState>& frame,
                          const PovmBuildOptions& options) {
  require_dimension(d);
  if (copies < 1) throw std::invalid_argument("copy count must be >= 1");
  const int order = options.moment_order > 0 ? options.moment_order : copies;
  if (order < copies) throw std::invalid_argument("moment order below the copy count");

  const std::uint64_t dim_n = sym_dimension(d, copies);
  const std::uint64_t dim_k = sym_dimension(d, order);
  if (frame.size() < dim_n * dim_n) {
    std::ostringstream msg;
    msg << "frame of " << frame.size() << " states is below sym_dimension^2 = "
        << dim_n * dim_n;
    throw std::invalid_argument(msg.str());
  }
  if (frame.size() < dim_k * dim_k) {
    std::ostringstream msg;
    msg << "frame of " << frame.size() << " states cannot span Hermitian operators at moment order "
        << order << " (needs >= " << dim_k * dim_k << ")";
    throw std::invalid_argument(msg.str());
  }

  // Target gamma * identity on Sym_order; gamma = D_N / D_order reproduces
  // completeness on Sym_N after tracing out the extra copies.
  const double gamma = static_cast<double>(dim_n) / static_cast<double>(dim_k);
  const Eigen::Index m = static_cast<Eigen::Index>(frame.size());
  const Eigen::Index rows = static_cast<Eigen::Index>(dim_k * dim_k);
  RealMatrix a(rows, m);
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    const Vector v = embed_product_state(frame[static_cast<std::size_t>(mu)], order);
    a.col(mu) = vec_hermitian(v * v.adjoint());
  }
  const Matrix target = gamma * Matrix::Identity(static_cast<Eigen::Index>(dim_k),
                                                 static_cast<Eigen::Index>(dim_k));
  const RealVector b = vec_hermitian(target);

  const detail::WeightSolve solve = detail::nonnegative_weights(a, b);
  if (solve.residual > options.tolerance) {
    std::ostringstream msg;
    msg << "POVM weight solve infeasible at moment order " << order << ": residual "
        << solve.residual << " > " << options.tolerance << " after " << solve.rounds
        << " rounds; enlarge the frame";
    throw std::runtime_error(msg.str());
  }

  std::vector<FramePoint> points;
  points.reserve(frame.size());
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    if (solve.weights(mu) > 0.0) {
      points.push_back({frame[static_cast<std::size_t>(mu)], solve.weights(mu)});
    }
  }
  return Povm(d, copies, std::move(points));
}

PovmDiagnostics validate_povm(const Povm& povm, double tolerance) {
  PovmDiagnostics diag;
  const Eigen::Index dim = povm.embedded(0).size();
  diag.completeness_residual = (povm.completeness_matrix() - Matrix::Identity(dim, dim)).norm();
  diag.min_weight = povm.weight(0);
  for (int mu = 1; mu < povm.size(); ++mu) diag.min_weight = std::min(diag.min_weight, povm.weight(mu));
  diag.weight_sum = povm.weight_sum();
  diag.expected_weight_sum = static_cast<double>(sym_dimension(povm.d(), povm.copies()));
  diag.pass = diag.completeness_residual <= tolerance && diag.min_weight >= 0.0;
  return diag;
}

double moment_resolution_residual(const Povm& povm, int order) {
  if (order < povm.copies()) throw std::invalid_argument("moment order below the copy count");
  const Eigen::Index dim = static_cast<Eigen::Index>(sym_dimension(povm.d(), order));
  Matrix q = Matrix::Zero(dim, dim);
  for (int mu = 0; mu < povm.size(); ++mu) {
    const Vector v = embed_product_state(povm.candidate(mu), order);
    q += povm.weight(mu) * (v * v.adjoint());
  }
  const double scale = povm.weight_sum() / static_cast<double>(dim);
  return (q - scale * Matrix::Identity(dim, dim)).norm();
}

RealVector outcome_distribution(const Povm& povm, const PureState& psi) {
  if (psi.dim() != povm.d()) throw std::invalid_argument("outcome_distribution: dimension mismatch");
  const Vector embedded = embed_product_state(psi, povm.copies());
  RealVector p(povm.size());
  for (int mu = 0; mu < povm.size(); ++mu) {
    p(mu) = povm.weight(mu) * std::norm(povm.embedded(mu).dot(embedded));
  }
  return p;
}

int sample_outcome(const Povm& povm, const PureState& psi, SplitMix64& rng) {
  const RealVector p = outcome_distribution(povm, psi);
  const double u = rng.uniform() * p.sum();
  double cumulative = 0.0;
  for (int mu = 0; mu < povm.size(); ++mu) {
    cumulative += p(mu);
    if (u <= cumulative) return mu;
  }
  return povm.size() - 1;
}

double estimation_fidelity_exact(const Povm& povm, const PureState& psi) {
  const RealVector p = outcome_distribution(povm, psi);
  double fidelity = 0.0;
  for (int mu = 0; mu < povm.size(); ++mu) {
    fidelity += p(mu) * std::norm(povm.candidate(mu).amplitudes().dot(psi.amplitudes()));
  }
  return fidelity;
}

double average_fidelity_exact(const Povm& povm) {
  return povm.weight_sum() * overlap_moment(povm.d(), povm.copies() + 1);
}

DensityOperator measure_prepare_average(const Povm& povm, const PureState& psi,
                                        const std::vector<DensityOperator>* preparations) {
  if (preparations && static_cast<int>(preparations->size()) != povm.size()) {
    throw std::invalid_argument("one preparation per outcome required");
  }
  const RealVector p = outcome_distribution(povm, psi);
  const int d = povm.d();
  Matrix out = Matrix::Zero(d, d);
  for (int mu = 0; mu < povm.size(); ++mu) {
    if (preparations) {
      out += p(mu) * (*preparations)[static_cast<std::size_t>(mu)].matrix();
    } else {
      const Vector& c = povm.candidate(mu).amplitudes();
      out += p(mu) * (c * c.adjoint());
    }
  }
  out /= p.sum();
  return DensityOperator(std::move(out));
}

DensityOperator apply_measure_prepare(const Povm& povm, const SymmetricState& rho) {
  if (rho.d() != povm.d() || rho.copies() != povm.copies()) {
    throw std::invalid_argument("apply_measure_prepare: POVM and state shapes differ");
  }
  const int d = povm.d();
  Matrix out = Matrix::Zero(d, d);
  double total = 0.0;
  for (int mu = 0; mu < povm.size(); ++mu) {
    const double p =
        povm.weight(mu) * (povm.embedded(mu).adjoint() * rho.matrix() * povm.embedded(mu))(0, 0).real();
    const Vector& c = povm.candidate(mu).amplitudes();
    out += p * (c * c.adjoint());
    total += p;
  }
  out /= total;
  return DensityOperator(std::move(out));
}

namespace {

double fit_eta(const PureState& probe, const DensityOperator& output, const GeneratorBasis& basis) {
  const BlochVector in = bloch_from_density(DensityOperator::pure(probe), basis);
  const BlochVector out = bloch_from_density(output, basis);
  const double in_norm2 = in.coords.squaredNorm();
  if (in_norm2 < 1e-24) {
    throw std::invalid_argument("probe state has a vanishing Bloch vector");
  }
  return in.coords.dot(out.coords) / in_norm2;
}

ShrinkReport summarize(const std::vector<double>& etas) {
  ShrinkReport report;
  report.probes = static_cast<int>(etas.size());
  double lo = etas.front(), hi = etas.front();
  for (double e : etas) {
    report.eta_mean += e;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  report.eta_mean /= static_cast<double>(etas.size());
  report.eta_spread = hi - lo;
  return report;
}

}  // namespace

ShrinkReport measure_prepare_channel_eta(const Povm& povm, const std::vector<PureState>& probes,
                                         const std::vector<DensityOperator>* preparations) {
  if (probes.size() < 5) {
    throw std::invalid_argument("shrinking-factor fit needs at least 5 probes");
  }
  const GeneratorBasis basis(povm.d());
  std::vector<double> etas;
  etas.reserve(probes.size());
  for (const PureState& probe : probes) {
    etas.push_back(fit_eta(probe, measure_prepare_average(povm, probe, preparations), basis));
  }
  return summarize(etas);
}

ShrinkReport measure_prepare_channel_eta_sampled(const Povm& povm,
                                                 const std::vector<PureState>& probes,
                                                 std::uint64_t samples, std::uint64_t seed) {
  if (probes.size() < 5) {
    throw std::invalid_argument("shrinking-factor fit needs at least 5 probes");
  }
  if (samples == 0) throw std::invalid_argument("sampled fit needs at least one sample");
  const GeneratorBasis basis(povm.d());
  const int d = povm.d();
  std::vector<double> etas;
  etas.reserve(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    SplitMix64 rng = substream(seed, i);
    Matrix sum = Matrix::Zero(d, d);
    for (std::uint64_t s = 0; s < samples; ++s) {
      const int mu = sample_outcome(povm, probes[i], rng);
      const Vector& c = povm.candidate(mu).amplitudes();
      sum += c * c.adjoint();
    }
    sum /= static_cast<double>(samples);
    etas.push_back(fit_eta(probes[i], DensityOperator(std::move(sum)), basis));
  }
  return summarize(etas);
}

std::vector<PureState> haar_frame(int d, int count, std::uint64_t seed) {
  require_dimension(d);
  if (count < 1) throw std::invalid_argument("frame needs at least one state");
  std::vector<PureState> frame;
  frame.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(i));
    frame.push_back(haar_random_state(d, rng));
  }
  return frame;
}

std::vector<PureState> pauli_eigenstate_frame() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<PureState> frame;
  frame.push_back(PureState::basis_state(2, 0));
  frame.push_back(PureState::basis_state(2, 1));
  frame.push_back(PureState(Vector{{Complex(s, 0), Complex(s, 0)}}));
  frame.push_back(PureState(Vector{{Complex(s, 0), Complex(-s, 0)}}));
  frame.push_back(PureState(Vector{{Complex(s, 0), Complex(0, s)}}));
  frame.push_back(PureState(Vector{{Complex(s, 0), Complex(0, -s)}}));
  return frame;
}

std::vector<PureState> tetrahedron_frame() {
  // Bloch vectors (±1, ±1, ±1)/sqrt(3) with an even number of minus signs.
  const double z = 1.0 / std::sqrt(3.0);
  const std::vector<std::array<double, 3>> bloch = {
      {z, z, z}, {z, -z, -z}, {-z, z, -z}, {-z, -z, z}};
  std::vector<PureState> frame;
  for (const auto& [x, y, w] : bloch) {
    const double theta = std::acos(w);
    const double phi = std::atan2(y, x);
    Vector v(2);
    v(0) = Complex(std::cos(theta / 2), 0.0);
    v(1) = std::polar(std::sin(theta / 2), phi);
    frame.push_back(PureState::normalized(std::move(v)));
  }
  return frame;
}

}  // namespace qcest
