#pragma once

#include <Eigen/Dense>

#include "meixner/meixner1d.hpp"

namespace meixner {

/// Parameters of two independent Meixner variables T, Z (alpha = 1, t' = 1)
/// whose preservation operators are mixed:
///   X = a_t^- + (p a_t^0 + s' a_z^0) + a_t^+,
///   Y = a_z^- + (r a_t^0 + v a_z^0) + a_z^+,
/// with beta_T = (c p + d r) / 2 and beta_Z = (j s' + k v) / 2.
struct MixedPreservationSpec {
  double c = 0.0, d = 0.0, j = 0.0, k = 0.0;
  double p = 0.0, r = 0.0, s_prime = 0.0, v = 0.0;
  Index truncation = 12;

  double beta_t() const { return 0.5 * (c * p + d * r); }
  double beta_z() const { return 0.5 * (j * s_prime + k * v); }

  /// Checks c s' + d v = 0, j p + k r = 0 and beta_T, beta_Z >= 0 up to a
  /// relative tolerance.
  void validate(double tolerance = 1e-8) const;
};

/// Vacuum plus the APC triples of X and Y on one truncated chaos space.
struct ApcSystem {
  Grading grading;
  ApcTriple x;
  ApcTriple y;

  Vectord vacuum() const { return Vectord::vacuum(grading); }
  Index truncation() const { return grading.truncation(); }

  const ApcTriple& variable(char letter) const { return letter == 'x' ? x : y; }
};

/// Independent pair on the tensor product, truncated at total degree N.
ApcSystem build_product(const JacobiSpec& spec_x, const JacobiSpec& spec_y, Index truncation);

ApcSystem build_mixed(const MixedPreservationSpec& spec);

enum class SingularPolicy { Reject, Allow };

/// (X', Y') = M (X, Y), applied to every component a^eps.
ApcSystem mix_linear(const ApcSystem& sys, const Eigen::Matrix2d& m,
                     SingularPolicy policy = SingularPolicy::Reject);

struct NondegeneracyCheck {
  bool ok = false;
  double gram_det = 0.0;
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
};

inline constexpr double kNondegenerateTolerance = 1e-9;

/// Gram matrix of {phi, X phi, Y phi}; ok iff its determinant exceeds the
/// tolerance times the product of its diagonal.
NondegeneracyCheck check_nondegenerate(const ApcSystem& sys);

/// E[X] and E[Y] read off the vacuum block of the preservation operators.
Eigen::Vector2d means(const ApcSystem& sys);
bool is_centered(const ApcSystem& sys, double tolerance = 1e-10);

}  // namespace meixner
