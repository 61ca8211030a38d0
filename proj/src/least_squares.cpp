#include "meixner/least_squares.hpp"

#include <algorithm>

namespace meixner {

Eigen::VectorXd flatten(const Operatord& op, Index from, Index to) {
  to = std::min(to, op.truncation());
  Index size = 0;
  for (Index n = std::max<Index>(from, 0); n <= to; ++n) size += op.block(n).size();
  Eigen::VectorXd out(size);
  Index pos = 0;
  for (Index n = std::max<Index>(from, 0); n <= to; ++n) {
    const auto& b = op.block(n);
    out.segment(pos, b.size()) = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    pos += b.size();
  }
  return out;
}

OperatorFit fit_operator(const Operatord& target, const std::vector<const Operatord*>& basis,
                         Index from, Index to, double scale, double rank_threshold) {
  const Eigen::VectorXd rhs = flatten(target, from, to);
  Eigen::MatrixXd design(rhs.size(), static_cast<Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j]->shift() != target.shift()) {
      throw ValidationError("fit_operator: basis operator shift differs from target");
    }
    design.col(static_cast<Index>(j)) = flatten(*basis[j], from, to);
  }

  OperatorFit fit;
  fit.coefficients = Eigen::VectorXd::Zero(design.cols());
  if (design.size() > 0 && design.cwiseAbs().maxCoeff() > 0.0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(rank_threshold);
    cod.compute(design);
    fit.rank = cod.rank();
    fit.coefficients = cod.solve(rhs);
  }
  const Eigen::VectorXd r = rhs - design * fit.coefficients;
  fit.residual_abs = r.norm();
  const double denom = std::max({rhs.norm(), scale, 1e-300});
  fit.residual = fit.residual_abs / denom;
  return fit;
}

}  // namespace meixner
