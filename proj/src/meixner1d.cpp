#include "meixner/meixner1d.hpp"

#include <cmath>
#include <limits>

#include "meixner/least_squares.hpp"

namespace meixner {

namespace {

constexpr double kZeroParameter = 1e-12;

bool is_zero(double v) { return std::abs(v) <= kZeroParameter; }

}  // namespace

double JacobiSpec::alpha_n(Index n) const {
  if (n < 0) return 0.0;
  if (support && n >= *support) return 0.0;
  return alpha * static_cast<double>(n) + alpha0;
}

double JacobiSpec::omega_n(Index n) const {
  if (n <= 0) return 0.0;
  if (support && n >= *support) return 0.0;
  const double x = static_cast<double>(n);
  return beta * x * x + (t - beta) * x;
}

void JacobiSpec::validate(Index truncation) const {
  for (double v : {alpha, alpha0, beta, t}) {
    if (!std::isfinite(v)) throw ValidationError("jacobi spec: non-finite parameter");
  }
  if (support) {
    const Index k = *support;
    if (k < 1) throw ValidationError("jacobi spec: finite support needs k >= 1");
    if (k == 1) return;
    // omega_n = n (t + beta (n - 1)) is positive on 1..k-1 iff it is at both ends.
    if (!(t > 0.0)) throw ValidationError("jacobi spec: finite support requires t > 0");
    if (!(t + beta * static_cast<double>(k - 2) > 0.0)) {
      throw ValidationError("jacobi spec: omega_{k-1} must be positive");
    }
    return;
  }
  if (!(t > 0.0)) throw ValidationError("jacobi spec: infinite support requires t > 0");
  if (beta < 0.0) throw ValidationError("jacobi spec: infinite support requires beta >= 0");
  for (Index n = 1; n <= truncation; ++n) {
    if (!(omega_n(n) > 0.0)) {
      throw ValidationError("jacobi spec: omega_" + std::to_string(n) + " is not positive");
    }
  }
}

std::string to_string(MeixnerClass c) {
  switch (c) {
    case MeixnerClass::U_f: return "U_f";
    case MeixnerClass::U_inf: return "U_inf";
    case MeixnerClass::B_f: return "B_f";
    case MeixnerClass::B_inf: return "B_inf";
    case MeixnerClass::NotMeixnerLie: return "NotMeixnerLie";
  }
  return "unknown";
}

bool is_meixner_lie(MeixnerClass c) { return c == MeixnerClass::U_f || c == MeixnerClass::B_f; }

MeixnerClass classify1d(const JacobiSpec& spec) {
  if (spec.infinite()) {
    if (!is_zero(spec.alpha) || is_zero(spec.beta)) return MeixnerClass::U_f;
    return MeixnerClass::U_inf;
  }
  const Index k = *spec.support;
  if (k <= 1 || is_zero(spec.alpha)) return MeixnerClass::B_inf;
  const double km1 = static_cast<double>(k - 1);
  const double gap = spec.t + spec.beta * km1;
  const double scale = std::abs(spec.t) + std::abs(spec.beta) * km1;
  return std::abs(gap) <= 1e-10 * scale ? MeixnerClass::B_f : MeixnerClass::NotMeixnerLie;
}

Operatord::Matrix ApcTriple::dense() const {
  return minus.to_dense() + zero.to_dense() + plus.to_dense();
}

ApcTriple build_triple(const JacobiSpec& spec, Index truncation) {
  spec.validate(truncation);
  const Index length = spec.support.value_or(truncation + 1);
  const Grading g = Grading::chain(truncation, length);
  ApcTriple tr{Operatord(g, -1), Operatord(g, 0), Operatord(g, +1)};
  for (Index n = 0; n <= truncation && g.dim(n) > 0; ++n) {
    tr.zero.block(n)(0, 0) = spec.alpha_n(n);
    if (n >= 1) tr.minus.block(n)(0, 0) = std::sqrt(spec.omega_n(n));
    if (n + 1 <= truncation && g.dim(n + 1) > 0) {
      tr.plus.block(n)(0, 0) = std::sqrt(spec.omega_n(n + 1));
    }
  }
  return tr;
}

LieClosure1d lie_closure_1d(const ApcTriple& triple) {
  const Grading& g = triple.grading();
  if (g.truncation() < 4) throw ValidationError("lie_closure_1d: truncation must be >= 4");

  const Operatord minus_zero = commutator(triple.minus, triple.zero).collapse();
  const Operatord minus_plus = commutator(triple.minus, triple.plus).collapse();
  const Index upto = std::min(minus_zero.valid_upto(), minus_plus.valid_upto());
  const Operatord id = identity<double>(g);

  const double size = std::max(triple.minus.norm(upto + 1), triple.zero.norm(upto));
  const double scale = size * size;

  LieClosure1d out;
  if (scale == 0.0) {
    out.closed = true;
    return out;
  }
  const OperatorFit f1 = fit_operator(minus_zero, {&triple.minus}, 0, upto, scale);
  const OperatorFit f2 = fit_operator(minus_plus, {&triple.zero, &id}, 0, upto, scale);
  out.alpha_fit = f1.coefficients(0);
  out.q_fit = f2.coefficients(0);
  out.s_fit = f2.coefficients(1);
  out.residual = std::max(f1.residual, f2.residual);
  out.closed = out.residual < kClosureTolerance;
  return out;
}

const std::vector<Preset>& presets() {
  // Each family at a unit scale, centered (alpha0 = 0).
  static const std::vector<Preset> table = [] {
    std::vector<Preset> p;
    p.push_back({"gaussian", "standard normal (Hermite)", {0.0, 0.0, 0.0, 1.0, std::nullopt}});
    p.push_back({"poisson", "Poisson, rate 1 (Charlier)", {1.0, 0.0, 0.0, 1.0, std::nullopt}});
    p.push_back({"gamma", "gamma, shape 1 scale 1 (Laguerre)", {2.0, 0.0, 1.0, 1.0, std::nullopt}});
    p.push_back({"negative_binomial", "negative binomial, r = 1, c = 1/2 (Meixner)",
                 {3.0, 0.0, 2.0, 2.0, std::nullopt}});
    p.push_back({"binomial", "binomial, m = 4, p = 1/4 (Krawtchouk)",
                 {0.5, 0.0, -3.0 / 16.0, 0.75, Index{5}}});
    p.push_back({"hyperbolic_secant", "symmetric hyperbolic secant (Meixner-Pollaczek)",
                 {0.0, 0.0, 1.0, 1.0, std::nullopt}});
    return p;
  }();
  return table;
}

std::optional<JacobiSpec> find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.spec;
  }
  return std::nullopt;
}

}  // namespace meixner
