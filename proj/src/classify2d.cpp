#include "meixner/classify2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "meixner/least_squares.hpp"

namespace meixner {

namespace {

constexpr double kBranchTolerance = 1e-8;

double snap_unit(double x) { return std::abs(x - 1.0) <= 1e-14 ? 1.0 : x; }

void require_centered(const ApcSystem& sys, const char* where) {
  if (!is_centered(sys, 1e-9)) {
    throw ValidationError(std::string(where) + ": system is not centered (E[X], E[Y] != 0)");
  }
}

// Projective root (alpha, beta) scaled to unit length, alpha >= 0 and, when
// alpha vanishes, beta > 0.
Eigen::Vector2d canonical_root(double alpha, double beta) {
  Eigen::Vector2d r(alpha, beta);
  r /= r.norm();
  if (r(0) < 0.0 || (r(0) == 0.0 && r(1) < 0.0)) r = -r;
  return r;
}

double slope(const Eigen::Vector2d& root) {
  return root(0) == 0.0 ? std::numeric_limits<double>::infinity() : root(1) / root(0);
}

}  // namespace

std::string to_string(CaseTaken c) {
  switch (c) {
    case CaseTaken::AlreadyDiagonal: return "AlreadyDiagonal";
    case CaseTaken::Case1: return "Case1";
    case CaseTaken::Case2: return "Case2";
  }
  return "unknown";
}

Normalized normalize(const ApcSystem& sys) {
  require_centered(sys, "normalize");
  const Eigen::VectorXd phi = sys.vacuum().coeffs();
  const Eigen::VectorXd xphi = sys.x.dense() * phi;
  const Eigen::VectorXd yphi = sys.y.dense() * phi;
  const double b = snap_unit(xphi.squaredNorm());
  const double h = snap_unit(yphi.squaredNorm());
  if (!(b > 0.0) || !(h > 0.0)) {
    throw DegeneracyError("normalize: X phi or Y phi vanishes");
  }
  const Eigen::Matrix2d m = Eigen::Vector2d(1.0 / std::sqrt(b), 1.0 / std::sqrt(h)).asDiagonal();
  const double e = xphi.dot(yphi) / std::sqrt(b * h);
  if (std::abs(e) >= 1.0 - kCorrelationMargin) {
    throw DegeneracyError("normalize: |E[XY]| is not below 1 after rescaling");
  }
  return {mix_linear(sys, m), m, e};
}

Eigen::Matrix2d homogeneous_roots(double a, double b, double c) {
  const double disc = b * b - 4.0 * a * c;
  if (!(disc > 1e-10 * (b * b + 4.0 * std::abs(a * c)))) {
    throw ClassificationError("homogeneous quadratic: discriminant is not positive (" +
                              std::to_string(disc) + ")");
  }
  // Cancellation-free pair: beta / alpha = qq / a and c / qq.
  const double qq = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::array<Eigen::Vector2d, 2> roots = {canonical_root(a, qq), canonical_root(qq, c)};
  if (slope(roots[1]) < slope(roots[0])) std::swap(roots[0], roots[1]);
  Eigen::Matrix2d out;
  out << roots[0].transpose(), roots[1].transpose();
  return out;
}

Elimination eliminate_couplings(const ApcSystem& sys) {
  const StructureCoefficients k = extract_coefficients(sys);
  Elimination out{sys};
  if (k.coupling() <= kBranchTolerance * (1.0 + k.scale())) return out;

  // Rows of the two proportional homogeneous quadratics A b^2 + B b a + C a^2.
  const std::array<Eigen::Vector3d, 2> rows = {Eigen::Vector3d(k.r_prime, -k.gamma(), -k.q),
                                               Eigen::Vector3d(k.u, k.delta(), -k.s)};
  const int pick = rows[0].cwiseAbs().maxCoeff() >= rows[1].cwiseAbs().maxCoeff() ? 0 : 1;
  const double a = rows[pick](0), b = rows[pick](1), c = rows[pick](2);
  out.row = pick + 1;
  out.discriminant = b * b - 4.0 * a * c;
  out.roots = homogeneous_roots(a, b, c);

  const Normalized renorm = normalize(mix_linear(sys, out.roots));
  out.system = renorm.system;
  out.rescale = renorm.matrix;
  out.matrix = renorm.matrix * out.roots;
  out.identity = false;

  const StructureCoefficients after = extract_coefficients(out.system);
  if (after.coupling() > kBranchTolerance * (1.0 + after.scale())) {
    throw ClassificationError("eliminate_couplings: couplings survive the transformation (" +
                              std::to_string(after.coupling()) + ")");
  }
  return out;
}

NumberOperatorCertificate certify_case2_number_operator(const ApcSystem& sys) {
  const Index upto = sys.truncation() - 1;
  const Eigen::VectorXd n = flatten(number_operator<double>(sys.grading), 0, upto);
  const Eigen::VectorXd ax = flatten(sys.x.zero, 0, upto);
  const Eigen::VectorXd ay = flatten(sys.y.zero, 0, upto);
  NumberOperatorCertificate out;
  out.p = ax.dot(n) / n.squaredNorm();
  out.v = ay.dot(n) / n.squaredNorm();
  out.residual = std::max((ax - out.p * n).norm() / (1.0 + ax.norm()),
                          (ay - out.v * n).norm() / (1.0 + ay.norm()));
  out.ok = out.residual <= kBranchTolerance;
  return out;
}

ClassificationReport decouple(const ApcSystem& sys, Index degree, double tolerance) {
  if (sys.truncation() < degree + 2) {
    throw ValidationError("decouple: truncation must be at least degree + 2");
  }
  require_centered(sys, "decouple");
  if (!check_nondegenerate(sys).ok) {
    throw DegeneracyError("decouple: phi, X phi and Y phi are linearly dependent");
  }
  const ClosureVerdict verdict = check_ML(sys);
  if (!verdict.is_ML) {
    std::string names;
    for (const auto& [name, res] : verdict.violated_brackets) names += " " + name;
    throw ClassificationError("decouple: input is not of class M_L; violated brackets:" + names);
  }

  ClassificationReport rep;
  rep.coefficients_before = extract_coefficients(sys);
  auto push = [&](const std::string& name, const Eigen::Matrix2d& m) {
    rep.stages.push_back({name, m});
    rep.transform = m * rep.transform;
  };

  const Normalized norm = normalize(sys);
  push("rescale", norm.matrix);

  const Elimination elim = eliminate_couplings(norm.system);
  if (!elim.identity) {
    push("quadratic-mix", elim.roots);
    push("rescale", elim.rescale);
    rep.discriminant = elim.discriminant;
  }

  ApcSystem current = elim.system;
  StructureCoefficients k = extract_coefficients(current);
  const double tol = kBranchTolerance * (1.0 + k.scale());
  if (std::abs(k.gamma()) <= tol && std::abs(k.delta()) <= tol) {
    rep.case_taken = CaseTaken::Case2;
    if (!certify_case2_number_operator(current).ok) {
      throw ClassificationError("decouple: preservation operators are not multiples of N");
    }
    if (std::abs(k.e) > tol) {
      Eigen::Matrix2d rot;
      rot << 1.0, 1.0, 1.0, -1.0;
      rot.row(0) /= std::sqrt(2.0 * (1.0 + k.e));
      rot.row(1) /= std::sqrt(2.0 * (1.0 - k.e));
      push("rotation", rot);
      current = mix_linear(current, rot);
      k = extract_coefficients(current);
    }
  } else {
    rep.case_taken = elim.identity ? CaseTaken::AlreadyDiagonal : CaseTaken::Case1;
    if (std::max({std::abs(k.e), std::abs(k.f), std::abs(k.g)}) > tol) {
      throw ClassificationError("decouple: [a_x^-, a_y^+] does not vanish");
    }
  }
  rep.coefficients_after = k;
  rep.jacobi = jacobi_audit(k);

  rep.target = {k.c, k.d, k.j, k.k, k.p, k.r, k.s_prime, k.v, sys.truncation()};
  try {
    rep.target.validate();
  } catch (const ValidationError& ex) {
    throw ClassificationError(std::string("decouple: target is not a valid mixed spec: ") +
                              ex.what());
  }

  rep.audit = moment_equal(mix_linear(sys, rep.transform), build_mixed(rep.target), degree,
                           tolerance);
  if (!rep.audit.equal) {
    throw AuditError("decouple: moments differ at word '" + rep.audit.worst_word + "'",
                     rep.audit.worst_word, rep.audit.worst_diff);
  }
  return rep;
}

}  // namespace meixner
