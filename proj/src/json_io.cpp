#include "meixner/json_io.hpp"

#include <fstream>
#include <regex>
#include <set>

namespace meixner::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) { return path + "." + key; }

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

void reject_unknown(const json& j, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) fail(child(path, key), "unknown field");
  }
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(child(path, key), "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Index integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<Index>();
}

double number_field(const json& j, const std::string& key, const std::string& path) {
  return number(field(j, key, path), child(path, key));
}

Eigen::Matrix2d parse_matrix2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a 2x2 array");
  Eigen::Matrix2d m;
  for (int r = 0; r < 2; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != 2) fail(rp, "expected a row of two numbers");
    for (int c = 0; c < 2; ++c) m(r, c) = number(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

json blocks_json(const Operatord& op) {
  json out = json::array();
  for (Index n = 0; n <= op.truncation(); ++n) out.push_back(to_json(Eigen::MatrixXd(op.block(n))));
  return out;
}

json triple_json(const ApcTriple& t) {
  return {{"minus", blocks_json(t.minus)}, {"zero", blocks_json(t.zero)}, {"plus", blocks_json(t.plus)}};
}

}  // namespace

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open input file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ValidationError(path + ": malformed JSON: " + ex.what());
  }
}

JacobiSpec parse_jacobi(const json& j, const std::string& path) {
  if (j.is_string() || (j.is_object() && j.contains("preset"))) {
    const json& name = j.is_string() ? j : j.at("preset");
    const std::string where = j.is_string() ? path : child(path, "preset");
    if (j.is_object()) reject_unknown(j, path, {"preset"});
    if (!name.is_string()) fail(where, "expected a preset name");
    auto spec = find_preset(name.get<std::string>());
    if (!spec) fail(where, "unknown preset '" + name.get<std::string>() + "'");
    return *spec;
  }
  require_object(j, path);
  reject_unknown(j, path, {"alpha", "alpha0", "beta", "t", "support"});
  JacobiSpec spec;
  spec.alpha = number_field(j, "alpha", path);
  spec.beta = number_field(j, "beta", path);
  spec.t = number_field(j, "t", path);
  if (j.contains("alpha0")) spec.alpha0 = number(j["alpha0"], child(path, "alpha0"));
  if (j.contains("support")) {
    const json& s = j["support"];
    const std::string sp = child(path, "support");
    if (s.is_string()) {
      if (s.get<std::string>() != "infinite") fail(sp, "expected \"infinite\" or {\"finite\": k}");
    } else if (s.is_object()) {
      reject_unknown(s, sp, {"finite"});
      spec.support = integer(field(s, "finite", sp), child(sp, "finite"));
    } else {
      fail(sp, "expected \"infinite\" or {\"finite\": k}");
    }
  }
  return spec;
}

json to_json(const JacobiSpec& spec) {
  json out = {{"alpha", spec.alpha}, {"alpha0", spec.alpha0}, {"beta", spec.beta}, {"t", spec.t}};
  if (spec.support) {
    out["support"] = {{"finite", *spec.support}};
  } else {
    out["support"] = "infinite";
  }
  return out;
}

MixedPreservationSpec parse_mixed(const json& j, Index truncation, const std::string& path) {
  require_object(j, path);
  MixedPreservationSpec spec;
  spec.c = number_field(j, "c", path);
  spec.d = number_field(j, "d", path);
  spec.j = number_field(j, "j", path);
  spec.k = number_field(j, "k", path);
  spec.p = number_field(j, "p", path);
  spec.r = number_field(j, "r", path);
  spec.s_prime = number_field(j, "s_prime", path);
  spec.v = number_field(j, "v", path);
  spec.truncation = truncation;
  return spec;
}

json to_json(const MixedPreservationSpec& s) {
  return {{"c", s.c}, {"d", s.d}, {"j", s.j}, {"k", s.k}, {"p", s.p},
          {"r", s.r}, {"s_prime", s.s_prime}, {"v", s.v}, {"N", s.truncation}};
}

ApcSystem parse_system(const json& j, const BuildOptions& opts, const std::string& path) {
  require_object(j, path);
  const json& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) fail(child(path, "kind"), "expected a string");
  const std::string kind = kind_j.get<std::string>();

  Index truncation = opts.truncation;
  if (j.contains("N") && !opts.truncation_explicit) truncation = integer(j["N"], child(path, "N"));
  if (truncation < 2) fail(child(path, "N"), "truncation must be >= 2");

  try {
    if (kind == "product") {
      reject_unknown(j, path, {"kind", "x", "y", "N"});
      const JacobiSpec x = parse_jacobi(field(j, "x", path), child(path, "x"));
      const JacobiSpec y = parse_jacobi(field(j, "y", path), child(path, "y"));
      return build_product(x, y, truncation);
    }
    if (kind == "mixed") {
      reject_unknown(j, path, {"kind", "c", "d", "j", "k", "p", "r", "s_prime", "v", "N"});
      return build_mixed(parse_mixed(j, truncation, path));
    }
    if (kind == "linear_mix") {
      reject_unknown(j, path, {"kind", "matrix", "base", "N"});
      const Eigen::Matrix2d m = parse_matrix2(field(j, "matrix", path), child(path, "matrix"));
      BuildOptions inner = opts;
      inner.truncation = truncation;
      inner.truncation_explicit = opts.truncation_explicit || j.contains("N");
      return mix_linear(parse_system(field(j, "base", path), inner, child(path, "base")), m);
    }
  } catch (const ValidationError& ex) {
    const std::string msg = ex.what();
    if (msg.rfind("$", 0) == 0) throw;
    fail(path, msg);
  }
  fail(child(path, "kind"), "expected \"product\", \"mixed\" or \"linear_mix\"");
}

MomentFunctional parse_moments(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"degree_cap", "commutative", "moments"});
  const Index cap = integer(field(j, "degree_cap", path), child(path, "degree_cap"));
  bool commutative = false;
  if (j.contains("commutative")) {
    if (!j["commutative"].is_boolean()) fail(child(path, "commutative"), "expected a boolean");
    commutative = j["commutative"].get<bool>();
  }
  const json& values = field(j, "moments", path);
  const std::string vp = child(path, "moments");
  require_object(values, vp);

  MomentFunctional mf = [&] {
    try {
      return commutative ? MomentFunctional::commutative(cap) : MomentFunctional::noncommutative(cap);
    } catch (const ValidationError& ex) {
      fail(child(path, "degree_cap"), ex.what());
    }
  }();
  static const std::regex exponent_key(R"(x(\d+)y(\d+))");
  for (const auto& [key, value] : values.items()) {
    const std::string kp = vp + "[\"" + key + "\"]";
    const double x = number(value, kp);
    try {
      if (commutative) {
        std::smatch m;
        if (!std::regex_match(key, m, exponent_key)) fail(kp, "expected a key of the form x{a}y{b}");
        mf.set(std::stoll(m[1]), std::stoll(m[2]), x);
      } else {
        mf.set(key, x);
      }
    } catch (const ValidationError& ex) {
      const std::string msg = ex.what();
      if (msg.rfind("$", 0) == 0) throw;
      fail(kp, msg);
    } catch (const std::out_of_range&) {
      fail(kp, "exponent out of range");
    }
  }
  return mf;
}

json to_json(const MomentFunctional& mf) {
  json values = json::object();
  if (mf.is_commutative()) {
    for (Index a = 0; a <= mf.degree_cap(); ++a) {
      for (Index b = 0; a + b <= mf.degree_cap(); ++b) {
        const Word w = Word(static_cast<std::size_t>(a), 'x') + Word(static_cast<std::size_t>(b), 'y');
        if (auto v = mf.find(w)) values["x" + std::to_string(a) + "y" + std::to_string(b)] = *v;
      }
    }
  } else {
    for (const Word& w : words_up_to(mf.degree_cap())) {
      if (auto v = mf.find(w)) values[w] = *v;
    }
  }
  return {{"degree_cap", mf.degree_cap()}, {"commutative", mf.is_commutative()}, {"moments", values}};
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

json to_json(const StructureCoefficients& c) {
  return {{"b", c.b},
          {"c", c.c},
          {"d", c.d},
          {"e", c.e},
          {"f", c.f},
          {"g", c.g},
          {"h", c.h},
          {"j", c.j},
          {"k", c.k},
          {"p", c.p},
          {"q", c.q},
          {"r", c.r},
          {"s", c.s},
          {"r_prime", c.r_prime},
          {"s_prime", c.s_prime},
          {"u", c.u},
          {"v", c.v},
          {"gamma", c.gamma()},
          {"delta", c.delta()},
          {"residual", c.residual},
          {"e_vacuum", c.e_vacuum},
          {"cross_divergence", c.cross_divergence},
          {"bracket_residuals", c.bracket_residuals}};
}

json to_json(const ClosureVerdict& v) {
  return {{"is_ML", v.is_ML},
          {"violated_brackets", v.violated_brackets},
          {"bracket_residuals", v.bracket_residuals},
          {"coefficients", to_json(v.coefficients)}};
}

json to_json(const std::vector<AuditItem>& items) {
  json out = json::array();
  for (const auto& i : items) {
    out.push_back({{"identity", i.name}, {"lhs", i.lhs}, {"rhs", i.rhs}, {"pass", i.pass}});
  }
  return out;
}

json to_json(const MomentComparison& c) {
  return {{"equal", c.equal},
          {"degree", c.degree},
          {"worst_word", c.worst_word},
          {"worst_diff", c.worst_diff},
          {"max_moment", c.max_moment}};
}

json to_json(const ApcSystem& sys) {
  return {{"grade_dims", sys.grading.dims()}, {"x", triple_json(sys.x)}, {"y", triple_json(sys.y)}};
}

json to_json(const DecompositionResult& d) {
  return {{"grade_dims", d.grade_dims},
          {"rank_tolerance_used", d.rank_tolerance_used},
          {"grade_leakage", d.grade_leakage},
          {"truncation", d.system.truncation()},
          {"system", to_json(d.system)}};
}

json to_json(const ClassificationReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back({{"name", s.name}, {"matrix", to_json(Eigen::MatrixXd(s.matrix))}});
  json out = {{"transform", to_json(Eigen::MatrixXd(r.transform))},
              {"stages", stages},
              {"case", to_string(r.case_taken)},
              {"target", to_json(r.target)},
              {"audit", to_json(r.audit)},
              {"coefficients_before", to_json(r.coefficients_before)},
              {"coefficients_after", to_json(r.coefficients_after)},
              {"jacobi_audit", to_json(r.jacobi)}};
  out["discriminant"] = r.discriminant ? json(*r.discriminant) : json(nullptr);
  return out;
}

}  // namespace meixner::io
