#pragma once

// JSON forms of the library's inputs and reports. Parse errors are thrown as
// ValidationError with a path such as "$.base.x.beta" in the message.

#include <json.hpp>
#include <string>

#include "meixner/apc.hpp"
#include "meixner/classify2d.hpp"
#include "meixner/lie.hpp"

namespace meixner::io {

using nlohmann::json;

json read_file(const std::string& path);

/// {"alpha", "alpha0"?, "beta", "t", "support"?: "infinite" | {"finite": k}},
/// a preset name, or {"preset": name}.
JacobiSpec parse_jacobi(const json& j, const std::string& path = "$");
json to_json(const JacobiSpec& spec);

/// The eight mixing parameters plus an optional "N".
MixedPreservationSpec parse_mixed(const json& j, Index truncation, const std::string& path = "$");
json to_json(const MixedPreservationSpec& spec);

struct BuildOptions {
  Index truncation = 12;
  /// When false, an "N" field in the document takes precedence over `truncation`.
  bool truncation_explicit = false;
};

/// {"kind": "product" | "mixed" | "linear_mix", ...}.
ApcSystem parse_system(const json& j, const BuildOptions& opts, const std::string& path = "$");

/// {"degree_cap", "commutative", "moments": {key: value}} with keys "x{a}y{b}"
/// for commutative functionals and plain words otherwise.
MomentFunctional parse_moments(const json& j, const std::string& path = "$");
json to_json(const MomentFunctional& mf);

json to_json(const Eigen::MatrixXd& m);
json to_json(const StructureCoefficients& c);
json to_json(const ClosureVerdict& v);
json to_json(const std::vector<AuditItem>& items);
json to_json(const MomentComparison& c);
json to_json(const ApcSystem& sys);
json to_json(const DecompositionResult& d);
json to_json(const ClassificationReport& r);

}  // namespace meixner::io
