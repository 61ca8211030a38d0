#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "meixner/graded_space.hpp"

namespace meixner::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kClassification = 3,
  kAudit = 4,
};

struct RunConfig {
  std::string command;
  std::optional<std::string> input_path;
  std::optional<std::string> output_path;
  Index truncation = 12;
  bool truncation_explicit = false;
  Index degree = 8;
  double tolerance = 1e-8;
  std::optional<std::uint64_t> seed;
};

/// Runs one command. The report goes to `out` (or the output file) only on
/// success; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses command-line arguments into a RunConfig and runs it.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace meixner::cli
