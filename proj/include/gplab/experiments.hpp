#pragma once

// Configuration-driven experiments writing report.json, CSV tables and
// binary dumps into an output directory.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gplab/config.hpp"

namespace gplab {

// Process exit codes shared by the CLI and the C API.
enum ExitCode : int {
  exit_ok = 0,
  exit_failed = 1,
  exit_validation = 2,
  exit_guardrail = 3,
};

struct RunOutcome {
  int exit_code = exit_ok;
  // Findings that stopped the run before any output was written.
  std::vector<Violation> violations;
  // Empty when validation failed.
  std::string report_json;
  std::filesystem::path report_path;
};

// Validates, then executes. Validation failures write nothing; failures
// during computation still write report.json with the error recorded.
RunOutcome run(const ExperimentConfig& config, const std::filesystem::path& out_dir,
               std::uint64_t seed = 0);

std::string version_string();

}  // namespace gplab
