#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

using meixner::cli::RunConfig;
using nlohmann::json;

namespace {

const std::string kData = MEIXNER_TEST_DATA;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cmd(RunConfig cfg) {
  std::ostringstream out, err;
  const int code = meixner::cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

Outcome run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "meixner_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = meixner::cli::main_with_args(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("meixner_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

RunConfig with_input(const std::string& command, const std::string& path) {
  RunConfig cfg;
  cfg.command = command;
  cfg.input_path = path;
  return cfg;
}

}  // namespace

TEST_CASE("catalog lists the presets") {
  const Outcome o = run_args({"catalog"});
  REQUIRE(o.code == 0);
  const json doc = json::parse(o.out);
  CHECK(doc["presets"].size() == 6);
  bool saw_gaussian = false;
  for (const auto& p : doc["presets"]) {
    if (p["name"] == "gaussian") {
      saw_gaussian = true;
      CHECK(p["class"] == "U_f");
      CHECK(p["meixner_lie"] == true);
    }
  }
  CHECK(saw_gaussian);
}

TEST_CASE("classify a premixed system") {
  const Outcome o = run_cmd(with_input("classify", kData + "/mixed_premixed.json"));
  REQUIRE(o.code == 0);
  const json doc = json::parse(o.out);
  CHECK(doc["audit"]["equal"] == true);
  CHECK(doc["case"] == "Case1");
  CHECK(doc["target"]["c"].get<double>() == doctest::Approx(1.0));
  CHECK(doc["target"]["r"].get<double>() == doctest::Approx(0.5));
  CHECK(doc["transform"].size() == 2);
}

TEST_CASE("output is deterministic") {
  const Outcome a = run_args({"classify", "--input", kData + "/mixed_premixed.json", "--seed", "7"});
  const Outcome b = run_args({"classify", "--input", kData + "/mixed_premixed.json", "--seed", "7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json doc = json::parse(a.out);
  CHECK(doc["stages"][0]["name"] == "seed-mix");
  CHECK(doc["seed"] == 7);
  CHECK(doc["audit"]["equal"] == true);
}

TEST_CASE("--output writes the report to a file") {
  const auto path = (std::filesystem::temp_directory_path() / "meixner_cli_report.json").string();
  std::filesystem::remove(path);
  const Outcome o = run_args({"check-ml", "--input", kData + "/mixed_premixed.json", "--output", path});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["is_ML"] == true);
}

TEST_CASE("check-ml reports violations") {
  const Outcome o = run_cmd(with_input("check-ml", kData + "/uinf_gaussian.json"));
  REQUIRE(o.code == 0);
  const json doc = json::parse(o.out);
  CHECK(doc["is_ML"] == false);
  CHECK(doc["violated_brackets"].contains("[x-,x+]"));
}

TEST_CASE("exit codes") {
  SUBCASE("malformed input names the offending path") {
    const std::string path = write_temp(
        "bad.json", R"({"kind": "product", "x": {"alpha": 0, "beta": "one", "t": 1}, "y": "gaussian"})");
    const Outcome o = run_cmd(with_input("classify", path));
    CHECK(o.code == 2);
    CHECK(o.out.empty());
    CHECK(o.err.find("$.x.beta") != std::string::npos);
  }
  SUBCASE("unparseable JSON") {
    const Outcome o = run_cmd(with_input("moments", write_temp("garbage.json", "{not json")));
    CHECK(o.code == 2);
  }
  SUBCASE("truncation below degree + 2") {
    const Outcome o = run_args({"classify", "--input", kData + "/mixed_premixed.json",
                                "--truncation", "9", "--degree", "8"});
    CHECK(o.code == 2);
  }
  SUBCASE("unknown command") { CHECK(run_args({"frobnicate"}).code == 2); }
  SUBCASE("non-M_L input cannot be classified") {
    const Outcome o = run_cmd(with_input("classify", kData + "/uinf_gaussian.json"));
    CHECK(o.code == 3);
    CHECK(o.out.empty());
  }
  SUBCASE("verify-equal mismatch") {
    const std::string path = write_temp(
        "pair.json",
        R"({"left": {"kind": "product", "x": "gaussian", "y": "gaussian"},
            "right": {"kind": "product", "x": "poisson", "y": "gaussian"}})");
    const Outcome o = run_cmd(with_input("verify-equal", path));
    CHECK(o.code == 4);
    CHECK(o.out.empty());
  }
  SUBCASE("verify-equal match") {
    const std::string path = write_temp(
        "same.json",
        R"({"left": {"kind": "product", "x": "gaussian", "y": "gaussian"},
            "right": {"kind": "linear_mix", "matrix": [[0.6, -0.8], [0.8, 0.6]],
                      "base": {"kind": "product", "x": "gaussian", "y": "gaussian"}}})");
    const Outcome o = run_cmd(with_input("verify-equal", path));
    CHECK(o.code == 0);
    CHECK(json::parse(o.out)["equal"] == true);
  }
}

TEST_CASE("moments and decompose round trip") {
  RunConfig cfg = with_input("moments", kData + "/mixed_premixed.json");
  cfg.degree = 6;
  const Outcome m = run_cmd(cfg);
  REQUIRE(m.code == 0);
  const std::string path = write_temp("moments.json", m.out);
  const Outcome d = run_args({"decompose", "--input", path});
  REQUIRE(d.code == 0);
  const json doc = json::parse(d.out);
  CHECK(doc["moment_residual"].get<double>() < 1e-8);
  CHECK(doc["grade_dims"] == json::array({1, 2, 3, 4}));
}
