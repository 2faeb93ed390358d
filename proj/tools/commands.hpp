#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "toral/error.hpp"
#include "toral/io.hpp"

namespace toral::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kParse = 1,
  kNotAutomorphism = 2,
  kEscapeCap = 3,
  kConditionFail = 4,
  kStatisticalFail = 5,
  kDegenerate = 6,
  kManifestMismatch = 7,
};

int exit_code_for(ErrorCode code);

struct Execution {
  int exit_code = kOk;
  /// Files written into the output directory, in emission order.
  std::vector<std::string> outputs;
};

/// Runs one command described by `input` ({"command", "matrix", "observable",
/// "options"}) and writes its artifacts into out_dir. Library errors are
/// reported on `err` and mapped to exit codes.
Execution execute(const json& input, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Full command line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toral::cli
