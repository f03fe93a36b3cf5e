#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qcest::detail {

namespace {

// Minimum-norm interpolation rounds in row space: the wide systems here
// (columns >> rows) make (A_T A_T^T) y = b much cheaper than factoring A_T,
// and dropping a column is a rank-1 downdate of the small row Gram matrix.
// Drops are capped per round; overshooting a marginal frame is repaired by
// the active-set phase below.
void prune_phase(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                 std::vector<bool>& active, Eigen::VectorXd& weights, int max_rounds,
                 int& rounds) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index m = a.cols();

  Eigen::MatrixXd gram(rows, rows);
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a);
  const double ridge = 1e-13 * gram.trace() / static_cast<double>(rows);

  Eigen::Index active_count = m;
  Eigen::VectorXd x(m);
  std::vector<std::pair<double, Eigen::Index>> negatives;
  for (rounds = 1; rounds <= max_rounds; ++rounds) {
    Eigen::MatrixXd regularized = gram.selfadjointView<Eigen::Lower>();
    regularized.diagonal().array() += ridge;
    const Eigen::VectorXd y = regularized.ldlt().solve(b);
    x.noalias() = a.transpose() * y;

    negatives.clear();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (active[static_cast<std::size_t>(j)] && x(j) <= 0.0) negatives.push_back({x(j), j});
    }
    if (negatives.empty() || active_count == 0) break;

    const std::size_t cap = std::max<std::size_t>(
        1, std::min(negatives.size(), static_cast<std::size_t>(active_count) / 4));
    std::nth_element(negatives.begin(), negatives.begin() + static_cast<std::ptrdiff_t>(cap - 1),
                     negatives.end());
    for (std::size_t k = 0; k < cap; ++k) {
      const Eigen::Index j = negatives[k].second;
      active[static_cast<std::size_t>(j)] = false;
      gram.selfadjointView<Eigen::Lower>().rankUpdate(a.col(j), -1.0);
      --active_count;
    }
  }

  weights.setZero();
  for (Eigen::Index j = 0; j < m; ++j) {
    if (active[static_cast<std::size_t>(j)] && x(j) > 0.0) weights(j) = x(j);
  }
}

Eigen::VectorXd solve_on_support(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                 const std::vector<Eigen::Index>& support) {
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    sub.col(static_cast<Eigen::Index>(k)) = a.col(support[k]);
  }
  return sub.completeOrthogonalDecomposition().solve(b);
}

// Lawson-Hanson active-set iterations from a warm support.  Terminates at
// the KKT point, or early once the residual is comfortably feasible.
void active_set_phase(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                      Eigen::VectorXd& weights, double good_enough) {
  const Eigen::Index m = a.cols();
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (weights(j) > 0.0) support.push_back(j);
  }
  const double kkt_tol = 1e-12 * b.norm();

  for (Eigen::Index outer = 0; outer < 4 * m; ++outer) {
    const Eigen::VectorXd residual = b - a * weights;
    if (residual.norm() <= good_enough) return;
    const Eigen::VectorXd gradient = a.transpose() * residual;

    Eigen::Index best = -1;
    double best_gradient = kkt_tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (weights(j) == 0.0 && gradient(j) > best_gradient) {
        best_gradient = gradient(j);
        best = j;
      }
    }
    if (best < 0) return;  // KKT point
    support.push_back(best);

    while (true) {
      const Eigen::VectorXd z = solve_on_support(a, b, support);
      bool feasible = true;
      double step = 1.0;
      for (std::size_t k = 0; k < support.size(); ++k) {
        if (z(static_cast<Eigen::Index>(k)) <= 0.0) {
          feasible = false;
          const double w = weights(support[k]);
          step = std::min(step, w / (w - z(static_cast<Eigen::Index>(k))));
        }
      }
      if (feasible) {
        for (std::size_t k = 0; k < support.size(); ++k) {
          weights(support[k]) = z(static_cast<Eigen::Index>(k));
        }
        break;
      }
      std::vector<Eigen::Index> next;
      next.reserve(support.size());
      for (std::size_t k = 0; k < support.size(); ++k) {
        const Eigen::Index j = support[k];
        const double moved = weights(j) + step * (z(static_cast<Eigen::Index>(k)) - weights(j));
        weights(j) = std::max(moved, 0.0);
        if (weights(j) > 0.0) next.push_back(j);
      }
      if (next.empty()) return;
      support = std::move(next);
    }
  }
}

}  // namespace

WeightSolve nonnegative_weights(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                int max_rounds) {
  WeightSolve out;
  out.weights = Eigen::VectorXd::Zero(a.cols());
  std::vector<bool> active(static_cast<std::size_t>(a.cols()), true);
  prune_phase(a, b, active, out.weights, max_rounds, out.rounds);

  out.residual = (a * out.weights - b).norm();
  const double good_enough = 1e-10 * b.norm();
  if (out.residual > good_enough) {
    active_set_phase(a, b, out.weights, good_enough);
    out.residual = (a * out.weights - b).norm();
  }
  return out;
}

}  // namespace qcest::detail
