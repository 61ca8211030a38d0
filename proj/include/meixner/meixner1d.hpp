#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meixner/graded_space.hpp"

namespace meixner {

/// Szego-Jacobi parameters of a one-dimensional Meixner variable:
///   alpha_n = alpha * n + alpha0,  omega_n = beta * n^2 + (t - beta) * n.
/// A finite support of k points truncates both sequences at n = k (omega_k = 0).
struct JacobiSpec {
  double alpha = 0.0;
  double alpha0 = 0.0;
  double beta = 0.0;
  double t = 1.0;
  std::optional<Index> support;  // number of support points; nullopt = infinite

  bool infinite() const { return !support.has_value(); }

  double alpha_n(Index n) const;
  double omega_n(Index n) const;

  /// Throws ValidationError unless omega_n > 0 where it is required, n <= truncation.
  void validate(Index truncation) const;
};

enum class MeixnerClass { U_f, U_inf, B_f, B_inf, NotMeixnerLie };

std::string to_string(MeixnerClass c);

/// True exactly for the Meixner-Lie classes U_f and B_f.
bool is_meixner_lie(MeixnerClass c);

MeixnerClass classify1d(const JacobiSpec& spec);

/// Annihilation, preservation and creation operators of one variable.
struct ApcTriple {
  Operatord minus;
  Operatord zero;
  Operatord plus;

  const Grading& grading() const { return minus.grading(); }
  /// X = a^- + a^0 + a^+ as a dense matrix on the truncated space.
  Operatord::Matrix dense() const;
};

/// Orthonormal-basis realization: a^+ e_n = sqrt(omega_{n+1}) e_{n+1},
/// a^0 e_n = alpha_n e_n, a^- e_n = sqrt(omega_n) e_{n-1}.
ApcTriple build_triple(const JacobiSpec& spec, Index truncation);

struct LieClosure1d {
  bool closed = false;
  double alpha_fit = 0.0;
  double q_fit = 0.0;
  double s_fit = 0.0;
  double residual = 0.0;
};

inline constexpr double kClosureTolerance = 1e-8;

/// Fits [a^-, a^0] = alpha a^- and [a^-, a^+] = q a^0 + s I over the valid grades.
LieClosure1d lie_closure_1d(const ApcTriple& triple);

struct Preset {
  std::string name;
  std::string description;
  JacobiSpec spec;
};

/// Centered, unit-scale members of the classical Meixner families.
const std::vector<Preset>& presets();
std::optional<JacobiSpec> find_preset(const std::string& name);

}  // namespace meixner
