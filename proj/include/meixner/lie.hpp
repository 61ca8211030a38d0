#pragma once

#include <map>
#include <string>
#include <vector>

#include "meixner/vectors2d.hpp"

namespace meixner {

/// Coefficients of the bracket table of a two-variable system:
///   [a_x^-, a_x^+] = b I + c a_x^0 + d a_y^0
///   [a_x^-, a_y^+] = e I + f a_x^0 + g a_y^0   (also [a_y^-, a_x^+])
///   [a_y^-, a_y^+] = h I + j a_x^0 + k a_y^0
///   [a_x^-, a_x^0] = p a_x^- + q a_y^-
///   [a_x^-, a_y^0] = r a_x^- + s a_y^-
///   [a_y^-, a_x^0] = r' a_x^- + s' a_y^-
///   [a_y^-, a_y^0] = u a_x^- + v a_y^-
struct StructureCoefficients {
  double b = 0, c = 0, d = 0, e = 0, f = 0, g = 0, h = 0, j = 0, k = 0;
  double p = 0, q = 0, r = 0, s = 0, r_prime = 0, s_prime = 0, u = 0, v = 0;

  double gamma() const { return s_prime - p; }
  double delta() const { return r - v; }

  /// Worst relative fit residual over the seven fitted brackets.
  double residual = 0.0;
  /// <[a_x^-, a_y^+] phi, phi>, which equals E[XY] for centered systems.
  double e_vacuum = 0.0;
  /// Largest difference between the (e, f, g) fitted from [a_x^-, a_y^+] and
  /// from [a_y^-, a_x^+].
  double cross_divergence = 0.0;
  std::map<std::string, double> bracket_residuals;

  /// max(|q|, |s|, |r'|, |u|).
  double coupling() const;
  /// Largest magnitude among all 17 coefficients.
  double scale() const;
};

struct ClosureVerdict {
  bool is_ML = false;
  StructureCoefficients coefficients;
  std::map<std::string, double> violated_brackets;  // name -> relative residual
  std::map<std::string, double> bracket_residuals;  // all 21
};

/// Fits every bracket of the table over the valid source grades. Requires a
/// centered system with N >= 5; throws DegeneracyError when a_x^- and a_y^-
/// are linearly dependent.
StructureCoefficients extract_coefficients(const ApcSystem& sys);

/// Evaluates the 21 brackets of {I, a_x^-, a_x^0, a_x^+, a_y^-, a_y^0, a_y^+}
/// and checks that each one falls back into their span. Requires N >= 5.
ClosureVerdict check_ML(const ApcSystem& sys);

struct AuditItem {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

inline constexpr double kAuditTolerance = 1e-8;

/// Identities forced on the coefficients by the Jacobi identity. The four
/// orthogonality relations are only included when q = s = r' = u = 0.
std::vector<AuditItem> jacobi_audit(const StructureCoefficients& coeffs);

bool all_pass(const std::vector<AuditItem>& items);

}  // namespace meixner
