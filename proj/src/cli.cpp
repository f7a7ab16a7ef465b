#include "vigp/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>

#include "vigp/config.hpp"
#include "vigp/report_io.hpp"

namespace vigp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunConfig load_config(const CommonOptions& opts) {
  RunConfig config = opts.config_path.empty() ? RunConfig{} : parse_config(read_file(opts.config_path));
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

fs::path output_path(const CommonOptions& opts, const std::string& name) {
  fs::path dir(opts.output_dir);
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_summary(const CommonOptions& opts, const RunConfig& config, const json& summary) {
  write_text(output_path(opts, config.output.summary), summary.dump(2) + "\n");
}

// The printed line carries everything but the resolved config.
void print_line(std::ostream& out, json summary) {
  summary.erase("config");
  out << summary.dump() << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const ProblemSpec& require_problem(const RunConfig& config) {
  if (!config.problem) throw ConfigError("/problem", "this subcommand needs a problem");
  return *config.problem;
}

json residuals_at(const ViProblem& p, const Vector& x) {
  json r;
  const Vector fx = evaluate(p.op(), x);
  r["operator_norm"] = fx.norm();
  r["normal_map"] = overflowed(fx) ? json(nullptr) : json(normal_map(p, x).norm());
  r["natural_map"] =
      contains(p.set(), x, kMembershipTol) && !overflowed(fx) ? json(natural_map(p, x).norm()) : json(nullptr);
  return r;
}

json certificates_at(const ViProblem& p, const Vector& x, std::optional<double> gamma) {
  json certs = json::array();
  const auto& c = p.op().constants();
  if (!gamma || overflowed(evaluate(p.op(), x))) return certs;
  const bool declared = c.gamma && *c.gamma == *gamma;
  auto normal = declared ? error_bound_normal(p, x) : error_bound_normal(p, x, *gamma);
  certs.push_back(to_json(normal));
  if (contains(p.set(), x, kMembershipTol)) {
    certs.push_back(to_json(declared ? error_bound_interior(p, x) : error_bound_interior(p, x, *gamma)));
    if (c.lipschitz) {
      certs.push_back(to_json(declared ? error_bound_natural(p, x)
                                       : error_bound_natural(p, x, *gamma, *c.lipschitz)));
    }
  }
  return certs;
}

int exit_code(Termination t) {
  switch (t) {
    case Termination::Converged:
      return kExitConverged;
    case Termination::MaxIters:
      return kExitMaxIters;
    case Termination::Diverged:
      return kExitDiverged;
  }
  return kExitError;
}

int cmd_solve(const CommonOptions& opts, std::ostream& out) {
  const RunConfig config = load_config(opts);
  const ProblemSpec& spec = require_problem(config);
  if (!config.x1) throw ConfigError("/x1", "solve needs a starting point");
  const ViProblem problem = spec.build();
  StopCriteria stop = config.stop;
  stop.trace_stride = config.output.trace_stride;

  const auto schedule = config.schedule.build();
  const auto gamma = problem.op().constants().gamma;
  SolveReport report;
  switch (config.method) {
    case Method::GpmConstant:
      report = gpm_constant(problem, *config.x1, config.schedule.value, stop);
      break;
    case Method::GpmVariable:
      report = gpm_variable(problem, *config.x1, schedule, stop);
      break;
    case Method::GpmUnbounded:
      report = gpm_unbounded(problem, *config.x1, *gamma, schedule, stop);
      break;
  }

  std::ostringstream csv;
  write_trace_csv(csv, report);
  write_text(output_path(opts, config.output.trace), csv.str());

  json summary = report_json(report);
  summary["config"] = config_to_json(config);
  summary["final_residuals"] = residuals_at(problem, report.final_point);
  summary["certificates"] = certificates_at(problem, report.final_point, gamma);

  // Rate analysis is meaningful for p-series runs on problems scaled to gamma = 1/2.
  if (config.method != Method::GpmConstant && problem.reference_solution() && gamma &&
      *gamma == 0.5) {
    std::vector<RateSample> samples;
    for (const auto& rec : report.iterates) {
      if (rec.dist_ref) samples.push_back({rec.k, *rec.dist_ref});
    }
    if (samples.size() >= 20) {
      const double p = config.schedule.kind == ScheduleSpec::Kind::Harmonic ? 1.0 : config.schedule.value;
      auto rate = analyze_rate(std::move(samples), p, config.experiments.rate_tail_fraction);
      rate.termination = report.termination;
      summary["rate_result"] = to_json(rate);
    }
  }
  summary["wall_time"] = report.wall_time;
  write_summary(opts, config, summary);
  print_line(out, summary);
  return exit_code(report.termination);
}

int cmd_repro_ex41(const CommonOptions& opts, std::ostream& out) {
  const RunConfig config = load_config(opts);
  const auto& e = config.experiments;
  const auto start = std::chrono::steady_clock::now();
  const auto verdict = reproduce_example_41(e.ex41_lambda, e.ex41_x1, e.ex41_iters);
  json summary = {{"config", config_to_json(config)},
                  {"verdict", to_json(verdict)},
                  {"wall_time", seconds_since(start)}};
  write_summary(opts, config, summary);
  print_line(out, summary);
  return verdict.passed ? kExitConverged : kExitVerdictFailed;
}

int cmd_repro_ex42(const CommonOptions& opts, std::ostream& out) {
  const RunConfig config = load_config(opts);
  const auto start = std::chrono::steady_clock::now();
  const auto verdict = reproduce_example_42(config.experiments.ex42_iters);
  json summary = {{"config", config_to_json(config)},
                  {"verdict", to_json(verdict)},
                  {"wall_time", seconds_since(start)}};
  write_summary(opts, config, summary);
  print_line(out, summary);
  return verdict.passed ? kExitConverged : kExitVerdictFailed;
}

int cmd_verify_bounds(const CommonOptions& opts, std::ostream& out) {
  const RunConfig config = load_config(opts);
  const auto start = std::chrono::steady_clock::now();
  const auto entries = verify_bounds(bound_catalog(), config.experiments.bound_points, config.seed);
  json problems = json::array();
  std::size_t violations = 0;
  for (const auto& entry : entries) {
    problems.push_back(to_json(entry));
    violations += entry.violations;
  }
  json summary = {{"config", config_to_json(config)},
                  {"problems", problems},
                  {"total_violations", violations},
                  {"passed", violations == 0},
                  {"wall_time", seconds_since(start)}};
  write_summary(opts, config, summary);
  print_line(out, summary);
  return violations == 0 ? kExitConverged : kExitVerdictFailed;
}

std::string rate_csv_name(double p) {
  std::string tag = format_real(p);
  for (char& ch : tag) {
    if (ch == '.') ch = '_';
  }
  return "rate_p" + tag + ".csv";
}

int cmd_rate_study(const CommonOptions& opts, const std::vector<double>& p_override,
                   std::optional<std::size_t> iters_override, std::ostream& out) {
  const RunConfig config = load_config(opts);
  const auto start = std::chrono::steady_clock::now();

  std::optional<ViProblem> problem;
  Vector x1;
  if (config.problem) {
    const ViProblem raw = config.problem->build();
    const auto gamma = raw.op().constants().gamma;
    if (!gamma) throw ConfigError("/problem/constants/gamma", "rate-study needs a declared gamma");
    problem.emplace(raw.set(), rescale_to_half_modulus(raw.op(), *gamma), raw.reference_solution());
    if (!config.x1) throw ConfigError("/x1", "rate-study on a configured problem needs x1");
    x1 = *config.x1;
  } else {
    const ViProblem bench = rate_benchmark();
    problem.emplace(bench.set(), rescale_to_half_modulus(bench.op(), *bench.op().constants().gamma),
                    bench.reference_solution());
    x1 = config.x1 ? *config.x1 : rate_benchmark_start();
  }

  const std::vector<double> ps = p_override.empty() ? config.experiments.rate_p : p_override;
  const std::size_t iters = iters_override.value_or(config.experiments.rate_iters);
  const double tail = config.experiments.rate_tail_fraction;

  // One independent worker per exponent; each writes only its own CSV.
  std::vector<std::future<RateStudyResult>> jobs;
  for (double p : ps) {
    jobs.push_back(std::async(std::launch::async, [&, p] {
      auto result = rate_study(*problem, x1, p, iters, tail);
      std::ostringstream csv;
      csv << "k,error\n";
      for (const auto& s : result.samples) csv << s.k << "," << format_real(s.error) << "\n";
      write_text(output_path(opts, rate_csv_name(p)), csv.str());
      return result;
    }));
  }

  json results = json::array();
  bool passed = true;
  for (auto& job : jobs) {
    const auto result = job.get();
    json r = to_json(result);
    const bool no_blowup = tail_ratio_max(result, 0.5) <= 1.05 * tail_ratio_max(result, 0.1);
    r["no_blowup"] = no_blowup;
    r["csv"] = rate_csv_name(result.p);
    passed = passed && no_blowup;
    results.push_back(std::move(r));
  }
  json summary = {{"config", config_to_json(config)},
                  {"iters", iters},
                  {"rate_results", results},
                  {"passed", passed},
                  {"wall_time", seconds_since(start)}};
  write_summary(opts, config, summary);
  print_line(out, summary);
  return passed ? kExitConverged : kExitVerdictFailed;
}

int cmd_estimate_constants(const CommonOptions& opts, std::ostream& out) {
  const RunConfig config = load_config(opts);
  const auto start = std::chrono::steady_clock::now();
  const ViProblem problem = config.problem ? config.problem->build() : example_41_problem();
  const auto n = config.experiments.samples;
  const auto seed = config.seed;
  const auto lip = estimate_lipschitz(problem.op(), problem.set(), n, seed);
  const double pseudo = estimate_strong_pseudomonotonicity(problem.op(), problem.set(), n, seed);
  json summary = {{"config", config_to_json(config)},
                  {"samples", n},
                  {"gamma_est", std::isinf(pseudo) ? json(nullptr) : json(pseudo)},
                  {"monotone_est", estimate_strong_monotonicity(problem.op(), problem.set(), n, seed)},
                  {"lipschitz_est", lip.value},
                  {"lipschitz_growing", lip.growing},
                  {"value_bound_est", value_bound(problem.op(), problem.set(), n, seed)},
                  {"wall_time", seconds_since(start)}};
  write_summary(opts, config, summary);
  print_line(out, summary);
  return kExitConverged;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration");
  cmd->add_option("--output-dir", opts.output_dir, "directory for traces and summaries");
  cmd->add_option("--seed", opts.seed, "overrides the configured seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient projection solver for strongly pseudomonotone variational inequalities",
               "vigp"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::vector<double> p_values;
  std::optional<std::size_t> rate_iters;

  auto* solve = app.add_subcommand("solve", "run the configured method");
  auto* ex41 = app.add_subcommand("repro-ex41", "constant-stepsize counter-example");
  auto* ex42 = app.add_subcommand("repro-ex42", "divergence on an unbounded set");
  auto* bounds = app.add_subcommand("verify-bounds", "sweep error bounds over the catalog");
  auto* rates = app.add_subcommand("rate-study", "convergence rates for lambda_k = 1/k^p");
  auto* consts = app.add_subcommand("estimate-constants", "sample-based operator constants");
  for (auto* cmd : {solve, ex41, ex42, bounds, rates, consts}) add_common(cmd, opts);
  rates->add_option("--p", p_values, "exponent in (0, 1]; repeatable");
  rates->add_option("--iters", rate_iters, "iterations per exponent");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*solve) return cmd_solve(opts, out);
    if (*ex41) return cmd_repro_ex41(opts, out);
    if (*ex42) return cmd_repro_ex42(opts, out);
    if (*bounds) return cmd_verify_bounds(opts, out);
    if (*rates) return cmd_rate_study(opts, p_values, rate_iters, out);
    if (*consts) return cmd_estimate_constants(opts, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace vigp
