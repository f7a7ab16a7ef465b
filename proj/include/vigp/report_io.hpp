#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "vigp/experiments.hpp"

namespace vigp {

/// Shortest decimal form that parses back to the same double ("inf", "-inf", "nan"
/// for non-finite values).
std::string format_real(double v);

/// Columns: k, lambda, x_1..x_n, step_norm, dist_ref, interior_radius. Absent
/// optional values are empty cells.
void write_trace_csv(std::ostream& out, const SolveReport& report);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const ErrorBoundCertificate& cert);
nlohmann::json to_json(const RateStudyResult& result);
nlohmann::json to_json(const Example41Verdict& verdict);
nlohmann::json to_json(const Example42Verdict& verdict);
nlohmann::json to_json(const BoundSweepEntry& entry);

/// termination, iterations, final_point and solver metadata (no config, no wall_time).
nlohmann::json report_json(const SolveReport& report);

}  // namespace vigp
