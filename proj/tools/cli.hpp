#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace skiorder::cli {

enum ExitCode : int {
  kSuccess = 0,
  kRuntimeError = 1,
  kUsageError = 2,
};

enum class OutputFormat { csv, json };

// What a command was asked to do, written next to its output so the exact
// run can be replayed with `--config`.
struct RunManifest {
  std::string command;
  std::string input_path;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 0;
  nlohmann::json config;

  nlohmann::json to_json() const;
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skiorder::cli
