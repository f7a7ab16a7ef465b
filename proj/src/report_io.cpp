#include "vigp/report_io.hpp"

#include <charconv>
#include <cmath>

namespace vigp {

using nlohmann::json;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const SolveReport& report) {
  const Index n = report.final_point.size();
  out << "k,lambda";
  for (Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",step_norm,dist_ref,interior_radius\n";
  auto optional_cell = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << format_real(*v);
  };
  for (const auto& rec : report.iterates) {
    out << rec.k << ',' << format_real(rec.lambda);
    for (Index i = 0; i < rec.x.size(); ++i) out << ',' << format_real(rec.x[i]);
    optional_cell(rec.step_norm);
    optional_cell(rec.dist_ref);
    optional_cell(rec.interior_radius);
    out << '\n';
  }
}

json to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json to_json(const ErrorBoundCertificate& cert) {
  json j{{"kind", to_string(cert.kind)},
         {"evaluation_point", to_json(cert.evaluation_point)},
         {"residual_norm", cert.residual_norm},
         {"radius", cert.radius},
         {"anchor", to_json(cert.anchor)},
         {"gamma", cert.gamma},
         {"constants_source", to_string(cert.source)}};
  j["lipschitz"] = cert.lipschitz ? json(*cert.lipschitz) : json(nullptr);
  return j;
}

json to_json(const RateStudyResult& r) {
  json j{{"p", r.p},
         {"theoretical_rate", to_string(r.theoretical_rate)},
         {"fitted_slope", r.fitted_slope},
         {"bound_constant", r.bound_constant},
         {"converged_exactly", r.converged_exactly},
         {"tail_samples", r.tail_samples},
         {"final_error", r.final_error},
         {"bound_constant_last_10pct", tail_ratio_max(r, 0.1)},
         {"bound_constant_last_50pct", tail_ratio_max(r, 0.5)}};
  if (!r.samples.empty()) j["final_k"] = r.samples.back().k;
  if (r.termination) j["termination"] = to_string(*r.termination);
  return j;
}

json to_json(const Example41Verdict& v) {
  json j{{"lambda", v.lambda},
         {"x1", v.x1},
         {"iters", v.iters},
         {"odd_strictly_increasing", v.odd_strictly_increasing},
         {"odd_in_range", v.odd_in_range},
         {"even_in_range", v.even_in_range},
         {"avoids_origin", v.avoids_origin},
         {"final_odd", v.final_odd},
         {"termination", to_string(v.termination)},
         {"passed", v.passed}};
  j["first_violation_k"] = v.first_violation_k ? json(*v.first_violation_k) : json(nullptr);
  json head = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(v.odd.size(), 8); ++i) head.push_back(v.odd[i]);
  j["odd_prefix"] = head;
  return j;
}

json to_json(const Example42Verdict& v) {
  json j{{"iterates", v.iterates},
         {"growth_bound_holds", v.growth_bound_holds},
         {"termination", to_string(v.termination)},
         {"passed", v.passed}};
  j["sentinel_k"] = v.sentinel_k ? json(*v.sentinel_k) : json(nullptr);
  return j;
}

json to_json(const BoundSweepEntry& e) {
  json j{{"name", e.name},
         {"points", e.points},
         {"max_violation_normal", e.max_violation_normal},
         {"max_violation_interior", e.max_violation_interior},
         {"violations", e.violations}};
  j["max_violation_natural"] =
      e.max_violation_natural ? json(*e.max_violation_natural) : json(nullptr);
  return j;
}

json report_json(const SolveReport& report) {
  json j{{"termination", to_string(report.termination)},
         {"iterations", report.iterations},
         {"final_point", to_json(report.final_point)},
         {"warnings", report.warnings}};
  if (report.converged_by) j["converged_by"] = to_string(*report.converged_by);
  if (report.divergence_cause) j["divergence_cause"] = to_string(*report.divergence_cause);
  if (report.restriction_radius) j["restriction_radius"] = *report.restriction_radius;
  return j;
}

}  // namespace vigp
