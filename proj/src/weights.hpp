#pragma once

#include <Eigen/Dense>

namespace qcest::detail {

struct WeightSolve {
  Eigen::VectorXd weights;  // full-length, pruned entries are exactly 0
  double residual = 0.0;    // ||A w - b|| on the unpruned system
  int rounds = 0;
};

/// Find nonnegative weights with A w ~= b by iterated minimum-norm least
/// squares: solve on the active column set, drop negative entries, repeat.
/// Terminates when the solution is nonnegative or max_rounds is hit; the
/// caller decides whether the achieved residual is acceptable.
WeightSolve nonnegative_weights(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                int max_rounds = 50);

}  // namespace qcest::detail
