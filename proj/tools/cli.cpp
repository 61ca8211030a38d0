#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "meixner/json_io.hpp"

namespace meixner::cli {

namespace {

using io::json;

constexpr Index kMaxDecomposeTruncation = 10;

json load_input(const RunConfig& cfg) {
  if (!cfg.input_path) throw ValidationError("--input: required for command '" + cfg.command + "'");
  return io::read_file(*cfg.input_path);
}

io::BuildOptions build_options(const RunConfig& cfg) {
  return {cfg.truncation, cfg.truncation_explicit};
}

void require_degree_margin(const ApcSystem& sys, Index degree) {
  if (sys.truncation() < degree + 2) {
    throw ValidationError("truncation " + std::to_string(sys.truncation()) +
                          " must be at least degree + 2 = " + std::to_string(degree + 2));
  }
}

// Random invertible matrix with entries in [-1, 1] and condition number <= 50.
Eigen::Matrix2d seeded_matrix(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (;;) {
    Eigen::Matrix2d m;
    m << unit(rng), unit(rng), unit(rng), unit(rng);
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
    const auto sv = svd.singularValues();
    if (sv(1) > 0.0 && sv(0) / sv(1) <= 50.0) return m;
  }
}

json cmd_classify(const RunConfig& cfg) {
  ApcSystem sys = io::parse_system(load_input(cfg), build_options(cfg));
  require_degree_margin(sys, cfg.degree);
  Eigen::Matrix2d premix = Eigen::Matrix2d::Identity();
  if (cfg.seed) {
    premix = seeded_matrix(*cfg.seed);
    sys = mix_linear(sys, premix);
  }
  ClassificationReport rep = decouple(sys, cfg.degree, cfg.tolerance);
  if (cfg.seed) {
    // Report the transform relative to the system as given.
    rep.stages.insert(rep.stages.begin(), {"seed-mix", premix});
    rep.transform = rep.transform * premix;
  }
  json out = io::to_json(rep);
  if (cfg.seed) out["seed"] = *cfg.seed;
  return out;
}

json cmd_check_ml(const RunConfig& cfg) {
  const ApcSystem sys = io::parse_system(load_input(cfg), build_options(cfg));
  return io::to_json(check_ML(sys));
}

json cmd_decompose(const RunConfig& cfg) {
  const MomentFunctional mf = io::parse_moments(load_input(cfg));
  const Index n = cfg.truncation_explicit ? cfg.truncation : mf.degree_cap() / 2;
  if (n > kMaxDecomposeTruncation) {
    throw ValidationError("decompose: truncation " + std::to_string(n) + " exceeds the supported " +
                          std::to_string(kMaxDecomposeTruncation));
  }
  const DecompositionResult res = decompose(mf, n);
  json out = io::to_json(res);

  double worst = 0.0;
  for (const Word& w : words_up_to(std::min(n, mf.degree_cap()))) {
    worst = std::max(worst, std::abs(mf(w) - moment(res.system, w)));
  }
  out["moment_residual"] = worst;
  try {
    out["coefficients"] = io::to_json(extract_coefficients(res.system));
  } catch (const Error&) {
    out["coefficients"] = nullptr;
  }
  return out;
}

json cmd_moments(const RunConfig& cfg) {
  const ApcSystem sys = io::parse_system(load_input(cfg), build_options(cfg));
  require_degree_margin(sys, cfg.degree);
  return io::to_json(moments_of(sys, cfg.degree));
}

json cmd_catalog(const RunConfig&) {
  json list = json::array();
  for (const auto& p : presets()) {
    list.push_back({{"name", p.name},
                    {"description", p.description},
                    {"spec", io::to_json(p.spec)},
                    {"class", to_string(classify1d(p.spec))},
                    {"meixner_lie", is_meixner_lie(classify1d(p.spec))}});
  }
  return {{"presets", list}};
}

json cmd_verify_equal(const RunConfig& cfg) {
  const json doc = load_input(cfg);
  if (!doc.is_object()) throw ValidationError("$: expected an object with \"left\" and \"right\"");
  for (const char* key : {"left", "right"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("$.") + key + ": missing field");
  }
  const ApcSystem left = io::parse_system(doc["left"], build_options(cfg), "$.left");
  const ApcSystem right = io::parse_system(doc["right"], build_options(cfg), "$.right");
  require_degree_margin(left, cfg.degree);
  require_degree_margin(right, cfg.degree);
  const MomentComparison cmp = moment_equal(left, right, cfg.degree, cfg.tolerance);
  if (!cmp.equal) {
    throw AuditError("moments differ at word '" + cmp.worst_word + "' by " +
                         std::to_string(cmp.worst_diff),
                     cmp.worst_word, cmp.worst_diff);
  }
  return io::to_json(cmp);
}

json dispatch(const RunConfig& cfg) {
  if (cfg.degree < 0) throw ValidationError("--degree: must be non-negative");
  if (!(cfg.tolerance > 0.0)) throw ValidationError("--tolerance: must be positive");
  if (cfg.command == "classify") return cmd_classify(cfg);
  if (cfg.command == "check-ml") return cmd_check_ml(cfg);
  if (cfg.command == "decompose") return cmd_decompose(cfg);
  if (cfg.command == "moments") return cmd_moments(cfg);
  if (cfg.command == "catalog") return cmd_catalog(cfg);
  if (cfg.command == "verify-equal") return cmd_verify_equal(cfg);
  throw ValidationError("unknown command '" + cfg.command + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.truncation_explicit && config.command != "decompose" &&
        config.truncation < config.degree + 2) {
      throw ValidationError("--truncation must be at least --degree + 2");
    }
    const std::string text = dispatch(config).dump(2) + "\n";
    if (config.output_path) {
      std::ofstream file(*config.output_path);
      if (!file) throw ValidationError(*config.output_path + ": cannot open output file");
      file << text;
      if (!file) throw ValidationError(*config.output_path + ": write failed");
    } else {
      out << text;
    }
    return kOk;
  } catch (const ValidationError& ex) {
    err << "error: " << ex.what() << "\n";
    return kValidation;
  } catch (const AuditError& ex) {
    err << "audit failure: " << ex.what() << "\n";
    return kAudit;
  } catch (const Error& ex) {
    err << "classification failure: " << ex.what() << "\n";
    return kClassification;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return kInternal;
  }
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-dimensional Meixner vectors: build, decompose, check and classify"};
  RunConfig cfg;
  std::string input, output;
  std::uint64_t seed = 0;
  app.add_option("command", cfg.command, "classify | check-ml | decompose | moments | catalog | verify-equal")
      ->required()
      ->check(CLI::IsMember({"classify", "check-ml", "decompose", "moments", "catalog", "verify-equal"}));
  app.add_option("--input", input, "input JSON file");
  app.add_option("--output", output, "write the report here instead of stdout");
  auto* trunc = app.add_option("--truncation", cfg.truncation, "truncation level N")->capture_default_str();
  app.add_option("--degree", cfg.degree, "moment degree")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "moment tolerance")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "pre-mix the input by a seeded random matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  if (!input.empty()) cfg.input_path = input;
  if (!output.empty()) cfg.output_path = output;
  cfg.truncation_explicit = trunc->count() > 0;
  if (seed_opt->count() > 0) cfg.seed = seed;
  return run(cfg, out, err);
}

}  // namespace meixner::cli
