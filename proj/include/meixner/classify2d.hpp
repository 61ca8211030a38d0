#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meixner/apc.hpp"
#include "meixner/lie.hpp"

namespace meixner {

enum class CaseTaken { AlreadyDiagonal, Case1, Case2 };
std::string to_string(CaseTaken c);

struct Stage {
  std::string name;
  Eigen::Matrix2d matrix;
};

struct ClassificationReport {
  /// S with (X', Y') = S (X, Y); the product of the stage matrices.
  Eigen::Matrix2d transform = Eigen::Matrix2d::Identity();
  std::vector<Stage> stages;
  CaseTaken case_taken = CaseTaken::AlreadyDiagonal;
  MixedPreservationSpec target;
  MomentComparison audit;
  StructureCoefficients coefficients_before;
  StructureCoefficients coefficients_after;
  std::vector<AuditItem> jacobi;
  /// Discriminant of the quadratic that removed the couplings, if one was solved.
  std::optional<double> discriminant;
};

struct Normalized {
  ApcSystem system;
  Eigen::Matrix2d matrix;
  double e = 0.0;
};

inline constexpr double kCorrelationMargin = 1e-9;

/// Rescales X and Y to unit variance. Throws DegeneracyError when a variance
/// vanishes or |E[XY]| >= 1 - 1e-9 afterwards.
Normalized normalize(const ApcSystem& sys);

struct Elimination {
  ApcSystem system;
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Identity();
  bool identity = true;
  /// Which homogeneous quadratic was solved: 1 for r' b^2 - gamma b a - q a^2,
  /// 2 for u b^2 + delta b a - s a^2.
  int row = 0;
  double discriminant = 0.0;
  /// Roots (alpha_w, beta_w), one per row, in the order used for Z_1, Z_2.
  Eigen::Matrix2d roots = Eigen::Matrix2d::Identity();
  /// Unit-variance rescaling applied after the mix; matrix = rescale * roots.
  Eigen::Matrix2d rescale = Eigen::Matrix2d::Identity();
};

/// Projective roots (alpha, beta) of a b^2 + b_coef b alpha + c alpha^2 = 0,
/// one per row, unit length, sorted by beta / alpha with alpha = 0 last.
/// Throws ClassificationError unless the discriminant is positive.
Eigen::Matrix2d homogeneous_roots(double a, double b, double c);

/// Mixes a normalized system into Z_w = alpha_w X + beta_w Y so that
/// q = s = r' = u = 0, then renormalizes.
Elimination eliminate_couplings(const ApcSystem& sys);

struct NumberOperatorCertificate {
  bool ok = false;
  double p = 0.0;
  double v = 0.0;
  double residual = 0.0;
};

/// Tests a_x^0 = p N and a_y^0 = v N on source grades <= N - 1.
NumberOperatorCertificate certify_case2_number_operator(const ApcSystem& sys);

/// Reduces a centered non-degenerate M_L system to the mixed-preservation
/// normal form and certifies moment equality up to `degree`.
ClassificationReport decouple(const ApcSystem& sys, Index degree = 8, double tolerance = 1e-8);

}  // namespace meixner
