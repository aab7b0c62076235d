#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gcdstat/density.hpp"
#include "gcdstat/theorems.hpp"

namespace gcdstat::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kInputError = 2, kConfigError = 3 };

// Unreadable or malformed input files and specs.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values that violate the configuration invariants.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { Analyze, Scheme, Verify };

struct RunConfig {
  Command command = Command::Analyze;
  std::string input;                 // sequence: generator JSON (file or inline) or raw CSV
  std::vector<std::string> schemes;  // scheme JSON (file or inline)
  Index length = 0;                  // 0 means the command default
  std::vector<double> eps_grid{1.0, 0.5, 0.1, 0.05, 0.01};
  VerdictPolicy policy;
  std::filesystem::path out = ".";
  std::uint64_t seed = 1;
  std::size_t instances = 1000;  // per property suite (verify)
  Fault fault = Fault::None;     // verify only
};

inline constexpr Index kDefaultAnalyzeLength = 4096;
inline constexpr Index kDefaultSuiteLength = 10000;

// Throws ConfigError.
void validate(const RunConfig& config);

// The resolved configuration as embedded in every report.
nlohmann::json to_json(const RunConfig& config);

// Each command writes its files under config.out and returns an exit code.
// They throw InputError or ConfigError.
int cmd_analyze(const RunConfig& config, std::ostream& log);
int cmd_scheme(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);

// Parses argv, dispatches and maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcdstat::cli
