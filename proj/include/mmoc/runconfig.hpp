#pragma once

// Run configuration for the command-line front end: named presets, strict
// flat-JSON config files, and the solve-and-emit pipeline (CSV trajectory +
// JSON report).

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmoc/newton.hpp"
#include "mmoc/spacecraft.hpp"

namespace mmoc {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownPreset : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownKey : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IOFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kCertificateFailure = 1;
inline constexpr int kSolveFailure = 2;
inline constexpr int kParseError = 3;
inline constexpr int kUnknownPreset = 4;
inline constexpr int kUnknownKey = 5;
inline constexpr int kIOFailure = 6;
inline constexpr int kInvalidConfig = 7;
inline constexpr int kNumericalFailure = 8;
inline constexpr int kInternal = 9;
}  // namespace exit_code

struct RunConfig {
  std::string name = "run";  // basename for emitted files (not serialized)
  ProblemParams params;
  std::string guess_kind = "zero";   // "zero" | "drift" | "explicit"
  std::vector<double> guess_values;  // used when guess_kind == "explicit"
  SolverConfig solver;
  std::string output_path;  // directory for emitted files; "" = cwd
  std::set<std::string> emit{"trajectory", "covectors", "certificates"};
};

// The five shipped presets, in a fixed order.
const std::vector<std::string>& preset_names();

// Config for a named preset. Throws UnknownPreset.
RunConfig preset_config(const std::string& name);

// Resolves a preset name, or parses a flat JSON config file. Strict keys:
// anything outside the documented set is an UnknownKey error. Infinite
// bounds are written/read as the string "inf".
RunConfig load_config(const std::string& path_or_preset);

// Writes cfg as a flat JSON object; load_config(path) round-trips it.
void save_config(const RunConfig& cfg, const std::string& path);

// Solves per cfg and emits files into cfg.output_path: <name>.csv (when
// "trajectory" is in emit; zeta/xi columns filled only when "covectors" is
// too) and <name>.report.json. Returns an exit_code value; failures are
// also reported as one JSON object on stderr.
int run_config(const RunConfig& cfg);

// Prints {"category":..., "message":...} on stderr and returns code.
int report_failure(const std::string& category, const std::string& message,
                   int code);

}  // namespace mmoc
