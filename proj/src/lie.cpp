#include "meixner/lie.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "meixner/least_squares.hpp"

namespace meixner {

namespace {

struct Span {
  Operatord identity;
  std::array<const Operatord*, 6> ops;  // x-, x0, x+, y-, y0, y+
  std::array<const char*, 6> names{"x-", "x0", "x+", "y-", "y0", "y+"};
  double scale = 0.0;

  explicit Span(const ApcSystem& sys)
      : identity(meixner::identity<double>(sys.grading)),
        ops{&sys.x.minus, &sys.x.zero, &sys.x.plus, &sys.y.minus, &sys.y.zero, &sys.y.plus} {
    const Index top = sys.truncation();
    const double size = std::max({sys.x.minus.norm(top), sys.y.minus.norm(top),
                                  sys.x.zero.norm(top - 1), sys.y.zero.norm(top - 1)});
    scale = std::max(size * size, 1e-300);
  }

  const Operatord& x_minus() const { return *ops[0]; }
  const Operatord& x_zero() const { return *ops[1]; }
  const Operatord& x_plus() const { return *ops[2]; }
  const Operatord& y_minus() const { return *ops[3]; }
  const Operatord& y_zero() const { return *ops[4]; }
  const Operatord& y_plus() const { return *ops[5]; }
};

// Fits one homogeneous component of a bracket back into the span.
OperatorFit fit_component(const Operatord& comp, const Span& span) {
  const Index upto = comp.valid_upto();
  switch (comp.shift()) {
    case 0:
      return fit_operator(comp, {&span.identity, &span.x_zero(), &span.y_zero()}, 0, upto,
                          span.scale);
    case -1:
      return fit_operator(comp, {&span.x_minus(), &span.y_minus()}, 1, upto, span.scale);
    case 1:
      return fit_operator(comp, {&span.x_plus(), &span.y_plus()}, 0, upto, span.scale);
    default: {
      // No element of the span shifts the grade by two: the component must vanish.
      OperatorFit fit;
      fit.residual_abs = comp.norm(upto);
      fit.residual = fit.residual_abs / span.scale;
      return fit;
    }
  }
}

double bracket_residual(const OperatorSumd& bracket, const Span& span) {
  double worst = 0.0;
  for (int shift : bracket.shifts()) {
    worst = std::max(worst, fit_component(bracket.component(shift), span).residual);
  }
  return worst;
}

std::string bracket_name(const char* a, const char* b) {
  return std::string("[") + a + "," + b + "]";
}

struct Table {
  StructureCoefficients coeffs;
  double worst = 0.0;
};

// The eight brackets that define the coefficients, fitted without any
// precondition on the system.
Table fit_table(const Span& span) {
  Table t;
  StructureCoefficients& sc = t.coeffs;
  auto fit = [&](const Operatord& a, const Operatord& b, const std::string& name) {
    const Operatord comp = commutator(a, b).collapse();
    OperatorFit f = fit_component(comp, span);
    sc.bracket_residuals[name] = f.residual;
    t.worst = std::max(t.worst, f.residual);
    return f.coefficients;
  };

  const Eigen::VectorXd xx = fit(span.x_minus(), span.x_plus(), "[x-,x+]");
  sc.b = xx(0), sc.c = xx(1), sc.d = xx(2);
  const Eigen::VectorXd xy = fit(span.x_minus(), span.y_plus(), "[x-,y+]");
  sc.e = xy(0), sc.f = xy(1), sc.g = xy(2);
  const Eigen::VectorXd yx = fit(span.y_minus(), span.x_plus(), "[y-,x+]");
  sc.cross_divergence = (xy - yx).cwiseAbs().maxCoeff();
  const Eigen::VectorXd yy = fit(span.y_minus(), span.y_plus(), "[y-,y+]");
  sc.h = yy(0), sc.j = yy(1), sc.k = yy(2);

  const Eigen::VectorXd x0x = fit(span.x_minus(), span.x_zero(), "[x-,x0]");
  sc.p = x0x(0), sc.q = x0x(1);
  const Eigen::VectorXd x0y = fit(span.x_minus(), span.y_zero(), "[x-,y0]");
  sc.r = x0y(0), sc.s = x0y(1);
  const Eigen::VectorXd y0x = fit(span.y_minus(), span.x_zero(), "[y-,x0]");
  sc.r_prime = y0x(0), sc.s_prime = y0x(1);
  const Eigen::VectorXd y0y = fit(span.y_minus(), span.y_zero(), "[y-,y0]");
  sc.u = y0y(0), sc.v = y0y(1);

  const Operatord cross = commutator(span.x_minus(), span.y_plus()).collapse();
  sc.e_vacuum = cross.block(0)(0, 0);
  sc.residual = t.worst;
  return t;
}

void require_truncation(const ApcSystem& sys, const char* where) {
  if (sys.truncation() < 5) {
    throw ValidationError(std::string(where) + ": truncation must be >= 5");
  }
}

}  // namespace

double StructureCoefficients::coupling() const {
  return std::max({std::abs(q), std::abs(s), std::abs(r_prime), std::abs(u)});
}

double StructureCoefficients::scale() const {
  double m = 0.0;
  for (double x : {b, c, d, e, f, g, h, j, k, p, q, r, s, r_prime, s_prime, u, v}) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

StructureCoefficients extract_coefficients(const ApcSystem& sys) {
  require_truncation(sys, "extract_coefficients");
  const Span span(sys);
  if (!is_centered(sys, 1e-9 * (1.0 + std::sqrt(span.scale)))) {
    throw ValidationError("extract_coefficients: system is not centered");
  }
  const Index top = sys.truncation();
  Eigen::MatrixXd design(flatten(span.x_minus(), 1, top).size(), 2);
  design << flatten(span.x_minus(), 1, top), flatten(span.y_minus(), 1, top);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-9);
  cod.compute(design);
  if (cod.rank() < 2) {
    throw DegeneracyError("extract_coefficients: a_x^- and a_y^- are linearly dependent");
  }
  return fit_table(span).coeffs;
}

ClosureVerdict check_ML(const ApcSystem& sys) {
  require_truncation(sys, "check_ML");
  const Span span(sys);
  ClosureVerdict out;
  out.coefficients = fit_table(span).coeffs;

  // The identity commutes with everything, so its six brackets are exact zeros.
  for (const auto* name : span.names) out.bracket_residuals[bracket_name("I", name)] = 0.0;
  for (std::size_t i = 0; i < span.ops.size(); ++i) {
    for (std::size_t k = i + 1; k < span.ops.size(); ++k) {
      const OperatorSumd br = commutator(*span.ops[i], *span.ops[k]);
      out.bracket_residuals[bracket_name(span.names[i], span.names[k])] =
          bracket_residual(br, span);
    }
  }
  // The preservation operators must commute outright, not just close.
  {
    const Operatord c = commutator(span.x_zero(), span.y_zero()).collapse();
    out.bracket_residuals["[x0,y0]"] =
        std::max(out.bracket_residuals["[x0,y0]"], c.norm(c.valid_upto()) / span.scale);
  }
  // The two mixed annihilation-creation brackets must coincide.
  {
    const Operatord a = commutator(span.x_minus(), span.y_plus()).collapse();
    const Operatord b = commutator(span.y_minus(), span.x_plus()).collapse();
    Operatord diff = a - b;
    diff.set_valid_upto(std::min(a.valid_upto(), b.valid_upto()));
    out.bracket_residuals["[x-,y+]-[y-,x+]"] = diff.norm(diff.valid_upto()) / span.scale;
  }
  for (const auto& [name, res] : out.bracket_residuals) {
    if (res >= kClosureTolerance) out.violated_brackets[name] = res;
  }
  out.is_ML = out.violated_brackets.empty();
  return out;
}

std::vector<AuditItem> jacobi_audit(const StructureCoefficients& k) {
  std::vector<AuditItem> items;
  auto add = [&](const char* name, double lhs, double rhs) {
    const bool pass =
        std::abs(lhs - rhs) <= kAuditTolerance * (1.0 + std::abs(lhs) + std::abs(rhs));
    items.push_back({name, lhs, rhs, pass});
  };
  const double gamma = k.gamma();
  const double delta = k.delta();
  add("s r' = u q", k.s * k.r_prime, k.u * k.q);
  add("s gamma = -q delta", k.s * gamma, -k.q * delta);
  add("u gamma = -r' delta", k.u * gamma, -k.r_prime * delta);
  // Reduces to r' - q = -e gamma once b = h = 1.
  add("b r' - h q = -e gamma", k.b * k.r_prime - k.h * k.q, -k.e * gamma);
  if (k.coupling() <= kAuditTolerance * (1.0 + k.scale())) {
    add("c s' + d v = 0", k.c * k.s_prime + k.d * k.v, 0.0);
    add("j p + k r = 0", k.j * k.p + k.k * k.r, 0.0);
    add("f p + g r = 0", k.f * k.p + k.g * k.r, 0.0);
    add("f s' + g v = 0", k.f * k.s_prime + k.g * k.v, 0.0);
  }
  return items;
}

bool all_pass(const std::vector<AuditItem>& items) {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.pass; });
}

}  // namespace meixner
