#pragma once

// Fitting an operator as a linear combination of other operators, with the
// blocks of every operator flattened over a range of source grades.

#include <vector>

#include "meixner/graded_space.hpp"

namespace meixner {

struct OperatorFit {
  Eigen::VectorXd coefficients;
  Index rank = 0;
  double residual = 0.0;      // relative: |target - fit| / scale
  double residual_abs = 0.0;  // Frobenius norm of target - fit
};

/// Flattens blocks of source grades [from, to] into one column.
Eigen::VectorXd flatten(const Operatord& op, Index from, Index to);

/// Minimum-norm least squares of target against span(basis) over source
/// grades [from, to]. Columns whose pivots fall below rank_threshold times the
/// largest pivot are treated as dependent. The relative residual is measured
/// against max(|target|, scale).
OperatorFit fit_operator(const Operatord& target, const std::vector<const Operatord*>& basis,
                         Index from, Index to, double scale, double rank_threshold = 1e-9);

}  // namespace meixner
