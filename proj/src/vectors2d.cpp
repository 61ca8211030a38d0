#include "meixner/vectors2d.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace meixner {

namespace {

// Basis of the truncated tensor product: grade n holds the pairs (i, j) with
// i + j = n, ordered by decreasing i.
struct TensorBasis {
  Grading grading;
  std::vector<std::vector<std::pair<Index, Index>>> pairs;  // per grade
  std::map<std::pair<Index, Index>, Index> position;         // index within its grade
};

TensorBasis tensor_basis(const Grading& gx, const Grading& gy, Index truncation) {
  TensorBasis tb;
  std::vector<Index> dims;
  for (Index n = 0; n <= truncation; ++n) {
    std::vector<std::pair<Index, Index>> grade;
    for (Index i = n; i >= 0; --i) {
      const Index j = n - i;
      if (gx.dim(i) > 0 && gy.dim(j) > 0) {
        tb.position[{i, j}] = static_cast<Index>(grade.size());
        grade.emplace_back(i, j);
      }
    }
    dims.push_back(static_cast<Index>(grade.size()));
    tb.pairs.push_back(std::move(grade));
  }
  tb.grading = Grading(std::move(dims));
  return tb;
}

// Lifts a one-variable operator to the factor `which` (0 = first, 1 = second).
Operatord lift(const Operatord& op1d, int which, const TensorBasis& tb) {
  const Grading& g = tb.grading;
  Operatord out(g, op1d.shift());
  for (Index n = 0; n <= g.truncation(); ++n) {
    if (!g.contains(n + op1d.shift())) continue;
    const auto& grade = tb.pairs[static_cast<std::size_t>(n)];
    for (Index col = 0; col < static_cast<Index>(grade.size()); ++col) {
      auto [i, j] = grade[static_cast<std::size_t>(col)];
      const Index src = which == 0 ? i : j;
      const auto& b = op1d.block(src);
      if (b.rows() == 0) continue;
      const double value = b(0, 0);
      std::pair<Index, Index> target =
          which == 0 ? std::make_pair(i + op1d.shift(), j) : std::make_pair(i, j + op1d.shift());
      auto it = tb.position.find(target);
      if (it == tb.position.end()) continue;
      out.block(n)(it->second, col) = value;
    }
  }
  return out;
}

ApcTriple lift(const ApcTriple& t, int which, const TensorBasis& tb) {
  return {lift(t.minus, which, tb), lift(t.zero, which, tb), lift(t.plus, which, tb)};
}

Operatord combine(double a, const Operatord& u, double b, const Operatord& w) {
  return a * u + b * w;
}

}  // namespace

void MixedPreservationSpec::validate(double tolerance) const {
  for (double val : {c, d, j, k, p, r, s_prime, v}) {
    if (!std::isfinite(val)) throw ValidationError("mixed spec: non-finite parameter");
  }
  if (truncation < 2) throw ValidationError("mixed spec: truncation must be >= 2");
  const double scale_cd = std::hypot(c, d) * std::hypot(s_prime, v);
  const double scale_jk = std::hypot(j, k) * std::hypot(p, r);
  if (std::abs(c * s_prime + d * v) > tolerance * (1.0 + scale_cd)) {
    throw ValidationError("mixed spec: (c, d) must be orthogonal to (s', v)");
  }
  if (std::abs(j * p + k * r) > tolerance * (1.0 + scale_jk)) {
    throw ValidationError("mixed spec: (j, k) must be orthogonal to (p, r)");
  }
  const double scale_t = std::hypot(c, d) * std::hypot(p, r);
  const double scale_z = std::hypot(j, k) * std::hypot(s_prime, v);
  if (beta_t() < -tolerance * (1.0 + scale_t)) {
    throw ValidationError("mixed spec: beta_T = (c p + d r) / 2 must be non-negative");
  }
  if (beta_z() < -tolerance * (1.0 + scale_z)) {
    throw ValidationError("mixed spec: beta_Z = (j s' + k v) / 2 must be non-negative");
  }
}

ApcSystem build_product(const JacobiSpec& spec_x, const JacobiSpec& spec_y, Index truncation) {
  const ApcTriple tx = build_triple(spec_x, truncation);
  const ApcTriple ty = build_triple(spec_y, truncation);
  const TensorBasis tb = tensor_basis(tx.grading(), ty.grading(), truncation);
  return {tb.grading, lift(tx, 0, tb), lift(ty, 1, tb)};
}

ApcSystem build_mixed(const MixedPreservationSpec& spec) {
  spec.validate();
  const JacobiSpec t_spec{1.0, 0.0, std::max(spec.beta_t(), 0.0), 1.0, std::nullopt};
  const JacobiSpec z_spec{1.0, 0.0, std::max(spec.beta_z(), 0.0), 1.0, std::nullopt};
  ApcSystem tz = build_product(t_spec, z_spec, spec.truncation);
  ApcSystem out = tz;
  out.x.zero = combine(spec.p, tz.x.zero, spec.s_prime, tz.y.zero);
  out.y.zero = combine(spec.r, tz.x.zero, spec.v, tz.y.zero);
  return out;
}

ApcSystem mix_linear(const ApcSystem& sys, const Eigen::Matrix2d& m, SingularPolicy policy) {
  if (policy == SingularPolicy::Reject &&
      std::abs(m.determinant()) <= 1e-12 * std::max(m.squaredNorm(), 1e-300)) {
    throw ValidationError("mix_linear: singular mixing matrix");
  }
  auto mix = [&](const Operatord& ux, const Operatord& uy, int row) {
    return combine(m(row, 0), ux, m(row, 1), uy);
  };
  ApcSystem out = sys;
  out.x = {mix(sys.x.minus, sys.y.minus, 0), mix(sys.x.zero, sys.y.zero, 0),
           mix(sys.x.plus, sys.y.plus, 0)};
  out.y = {mix(sys.x.minus, sys.y.minus, 1), mix(sys.x.zero, sys.y.zero, 1),
           mix(sys.x.plus, sys.y.plus, 1)};
  return out;
}

NondegeneracyCheck check_nondegenerate(const ApcSystem& sys) {
  const Vectord phi = sys.vacuum();
  const Eigen::VectorXd xphi = sys.x.dense() * phi.coeffs();
  const Eigen::VectorXd yphi = sys.y.dense() * phi.coeffs();
  Eigen::Matrix<double, Eigen::Dynamic, 3> vs(phi.coeffs().size(), 3);
  vs << phi.coeffs(), xphi, yphi;

  NondegeneracyCheck out;
  out.gram = vs.transpose() * vs;
  out.gram_det = out.gram.determinant();
  const double diag = out.gram.diagonal().prod();
  out.ok = diag > 0.0 && out.gram_det > kNondegenerateTolerance * diag;
  return out;
}

Eigen::Vector2d means(const ApcSystem& sys) {
  return {sys.x.zero.block(0)(0, 0), sys.y.zero.block(0)(0, 0)};
}

bool is_centered(const ApcSystem& sys, double tolerance) {
  return means(sys).cwiseAbs().maxCoeff() <= tolerance;
}

}  // namespace meixner
