#ifndef RELEQ_REPORT_HPP
#define RELEQ_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "releq/transversality.hpp"

namespace releq {

inline constexpr const char* kToolName = "releq";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Raised for malformed configurations (schema violations, unknown keys,
/// unparsable values). The CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a task cannot complete; the CLI emits the partial report
/// and exits with code 1.
struct TaskError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  std::string preset;  // rigid_body | rigid_body_rotors | cotangent_group
  std::vector<double> inertia{1.0, 2.0, 3.0};  // rigid_body
  double coupling = 0.3;                       // rigid_body_rotors
  std::uint64_t seed = 42;                     // rigid_body_rotors
  std::string algebra;                         // cotangent_group
  std::vector<std::vector<double>> mass_matrix;  // cotangent_group
};

struct TaskSpec {
  std::string type;  // strata | solve | analyze | generic
  int samples = 1000;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<std::string> strategies{"generic", "origin"};
  int multistart = 100;
  double momentum_scale = 1.0;
  bool include_origin = false;
  int trials = 100;
  double scale = 0.05;
};

/// Runtime-tunable tolerances (everything else is a fixed library
/// constant shared by all verdict routes).
struct RunTolerances {
  double membership_residual = 1e-9;  // slice local-model threshold
  double solver_truncation = 1e-8;    // Gauss-Newton pseudo-inverse cut
};

struct RunConfig {
  std::string algebra;  // for strata without a system
  std::optional<SystemSpec> system;
  std::vector<TaskSpec> tasks;
  RunTolerances tolerances;
  std::string output;
};

/// Parses and validates a configuration document. Unknown keys anywhere
/// are errors; tolerances must be positive; randomized tasks need seeds.
RunConfig parse_config(const nlohmann::ordered_json& doc);

CotangentGroupSystem build_system(const SystemSpec& spec);

struct RunResult {
  nlohmann::ordered_json report;
  int exit_code = 0;            // 0 success, 1 task failure
  std::string summary;          // human-readable digest
};

/// Executes the configured tasks in order. Deterministic for fixed seeds:
/// rerunning produces a byte-identical report.
RunResult run(const RunConfig& config);

}  // namespace releq

#endif
