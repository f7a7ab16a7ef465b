#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vigp/solver.hpp"

namespace vigp {

/// Schema violation. path() is a JSON pointer ("/problem/set/radius"), empty for
/// syntax errors, which carry line and column in the message instead.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::invalid_argument(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Method { GpmConstant, GpmVariable, GpmUnbounded };

struct ScheduleSpec {
  enum class Kind { Constant, PSeries, Harmonic };
  Kind kind = Kind::PSeries;
  double value = 1.0;  // lambda for Constant, p for PSeries, unused for Harmonic

  StepsizeSchedule build() const;
  friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

struct ProblemSpec {
  ConvexSet set;
  OperatorSpec op;
  std::optional<Vector> reference_solution;

  ViProblem build() const { return ViProblem(set, op, reference_solution); }
  friend bool operator==(const ProblemSpec& a, const ProblemSpec& b);
};

struct OutputSpec {
  std::string trace = "trace.csv";
  std::string summary = "summary.json";
  std::optional<std::size_t> trace_stride;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentSpec {
  std::size_t samples = 10000;  // estimate-constants pairs
  double ex41_lambda = 0.5;
  double ex41_x1 = 0.2;
  std::size_t ex41_iters = 10000;
  std::size_t ex42_iters = 10;
  std::vector<double> rate_p = {0.25, 0.5, 0.75, 1.0};
  std::size_t rate_iters = 100000;
  double rate_tail_fraction = 0.5;
  std::size_t bound_points = 1000;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

struct RunConfig {
  std::optional<ProblemSpec> problem;
  Method method = Method::GpmVariable;
  std::optional<Vector> x1;
  ScheduleSpec schedule;
  StopCriteria stop;  // trace_stride lives in output
  OutputSpec output;
  std::uint64_t seed = 0;
  ExperimentSpec experiments;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Parses a JSON run configuration, fills defaults and validates it. Unknown
/// keys, type errors and method/schedule incompatibilities raise ConfigError.
RunConfig parse_config(std::string_view text);

/// The fully resolved configuration; parse_config(dump) reproduces the value.
nlohmann::json config_to_json(const RunConfig& config);
std::string serialize_config(const RunConfig& config);

std::string to_string(Method m);

}  // namespace vigp
