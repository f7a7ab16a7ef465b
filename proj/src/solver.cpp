#include "vigp/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace vigp {

namespace {

constexpr std::size_t kTraceBudget = 10000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t trace_stride(const StopCriteria& stop) {
  if (stop.trace_stride) return *stop.trace_stride;
  if (stop.max_iters <= kTraceBudget) return 1;
  return (stop.max_iters + kTraceBudget - 1) / kTraceBudget;
}

void require_start(const ViProblem& p, const Vector& x1) {
  require_dim("starting point", p.dim(), x1.size());
  if (!all_finite(x1)) throw std::invalid_argument("starting point must be finite");
  if (!contains(p.set(), x1, kMembershipTol)) throw DomainError("starting point lies outside K");
}

void require_variable_schedule(const StepsizeSchedule& schedule) {
  if (std::holds_alternative<ConstantStep>(schedule.variant())) {
    throw ScheduleError("schedule violates diminishing condition: constant stepsizes do not tend to 0");
  }
  if (const auto* custom = std::get_if<CustomSchedule>(&schedule.variant())) {
    if (custom->summable) throw ScheduleError("schedule violates non-summable condition");
    if (!custom->diminishing) throw ScheduleError("schedule violates diminishing condition");
  }
}

// Shared projection iteration. gamma, when known, feeds the interior residual
// radius |F(x_k)|/gamma used for recording and residual stopping.
SolveReport iterate(const ViProblem& p, const Vector& x1, const StepsizeSchedule& schedule,
                    const StopCriteria& stop, std::optional<double> gamma) {
  stop.validate();
  if (stop.residual_tol && !gamma) {
    throw std::invalid_argument("residual stopping needs a declared or supplied gamma");
  }
  const auto started = std::chrono::steady_clock::now();
  const std::size_t stride = trace_stride(stop);
  const auto& reference = p.reference_solution();

  SolveReport report;
  Vector x = x1;
  auto finish = [&](std::size_t k, const Vector& fx) {
    IterateRecord rec{k, schedule(k), x, std::nullopt, std::nullopt, std::nullopt};
    if (reference) rec.dist_ref = (x - *reference).norm();
    if (gamma) rec.interior_radius = fx.norm() / *gamma;
    report.iterates.push_back(std::move(rec));
    report.final_point = x;
  };

  for (std::size_t k = 1;; ++k) {
    const Vector fx = evaluate(p.op(), x);
    if (overflowed(fx)) {
      report.termination = Termination::Diverged;
      report.divergence_cause = DivergenceCause::Overflow;
      finish(k, fx);
      break;
    }
    const double norm = x.norm();
    if (!std::isfinite(norm) || norm > stop.divergence_radius) {
      report.termination = Termination::Diverged;
      report.divergence_cause = DivergenceCause::Radius;
      finish(k, fx);
      break;
    }
    if (stop.residual_tol && fx.norm() / *gamma <= *stop.residual_tol) {
      report.termination = Termination::Converged;
      report.converged_by = ConvergedBy::Residual;
      finish(k, fx);
      break;
    }
    if (k > stop.max_iters) {
      report.termination = Termination::MaxIters;
      finish(k, fx);
      break;
    }

    const double lambda = schedule(k);
    Vector next = project(p.set(), x - lambda * fx);
    if (next.hasNaN()) throw std::runtime_error("iterate became NaN at k = " + std::to_string(k));
    const double step = (next - x).norm();
    if (k == 1 || k % stride == 0) {
      IterateRecord rec{k, lambda, x, step, std::nullopt, std::nullopt};
      if (reference) rec.dist_ref = (x - *reference).norm();
      if (gamma) rec.interior_radius = fx.norm() / *gamma;
      report.iterates.push_back(std::move(rec));
    }
    x = std::move(next);
    report.iterations = k;
    if (step <= stop.step_tol) {
      report.termination = Termination::Converged;
      report.converged_by = ConvergedBy::Step;
      finish(k + 1, evaluate(p.op(), x));
      break;
    }
  }

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace

StepsizeSchedule StepsizeSchedule::constant(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("constant stepsize must be positive");
  }
  return StepsizeSchedule(ConstantStep{lambda});
}

StepsizeSchedule StepsizeSchedule::pseries(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p-series exponent must lie in (0, 1]");
  return StepsizeSchedule(PSeries{p});
}

StepsizeSchedule StepsizeSchedule::custom(std::function<double(std::size_t)> generator,
                                          bool summable, bool diminishing, std::string label) {
  if (!generator) throw std::invalid_argument("custom schedule needs a generator");
  return StepsizeSchedule(CustomSchedule{std::move(generator), summable, diminishing, std::move(label)});
}

double StepsizeSchedule::operator()(std::size_t k) const {
  if (k < 1) throw std::invalid_argument("stepsize index starts at 1");
  return std::visit(Overloaded{
                        [](const ConstantStep& s) { return s.lambda; },
                        [k](const PSeries& s) {
                          const double kd = static_cast<double>(k);
                          return s.p == 1.0 ? 1.0 / kd : 1.0 / std::pow(kd, s.p);
                        },
                        [k](const CustomSchedule& s) {
                          const double v = s.generator(k);
                          if (!(v > 0.0) || !std::isfinite(v)) {
                            throw std::invalid_argument("custom stepsize must be positive");
                          }
                          return v;
                        },
                    },
                    v_);
}

bool StepsizeSchedule::admissible_for_variable() const {
  return std::visit(Overloaded{
                        [](const ConstantStep&) { return false; },
                        [](const PSeries&) { return true; },
                        [](const CustomSchedule& s) { return !s.summable && s.diminishing; },
                    },
                    v_);
}

std::string StepsizeSchedule::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const ConstantStep& s) { out << "constant(" << s.lambda << ")"; },
                 [&](const PSeries& s) { out << "pseries(" << s.p << ")"; },
                 [&](const CustomSchedule& s) { out << s.label; },
             },
             v_);
  return out.str();
}

void StopCriteria::validate() const {
  if (!(step_tol >= 0.0)) throw std::invalid_argument("step_tol must be nonnegative");
  if (residual_tol && !(*residual_tol >= 0.0)) {
    throw std::invalid_argument("residual_tol must be nonnegative");
  }
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(divergence_radius > 0.0)) throw std::invalid_argument("divergence_radius must be positive");
  if (trace_stride && *trace_stride < 1) throw std::invalid_argument("trace_stride must be at least 1");
}

SolveReport gpm_constant(const ViProblem& p, const Vector& x1, double lambda,
                         const StopCriteria& stop) {
  require_start(p, x1);
  const auto schedule = StepsizeSchedule::constant(lambda);
  const auto& c = p.op().constants();
  std::vector<std::string> warnings;
  if (c.gamma && c.lipschitz) {
    const double upper = 2.0 * *c.gamma / (*c.lipschitz * *c.lipschitz);
    if (!(lambda < upper)) {
      std::ostringstream msg;
      msg << "stepsize " << lambda << " lies outside the convergence window (0, " << upper
          << ") implied by the declared gamma and Lipschitz constant";
      warnings.push_back(msg.str());
    }
  }
  auto report = iterate(p, x1, schedule, stop, c.gamma);
  report.warnings = std::move(warnings);
  return report;
}

SolveReport gpm_variable(const ViProblem& p, const Vector& x1, const StepsizeSchedule& schedule,
                         const StopCriteria& stop) {
  require_variable_schedule(schedule);
  require_start(p, x1);
  return iterate(p, x1, schedule, stop, p.op().constants().gamma);
}

SolveReport gpm_unbounded(const ViProblem& p, const Vector& x1, double gamma,
                          const StepsizeSchedule& schedule, const StopCriteria& stop) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  require_variable_schedule(schedule);
  require_start(p, x1);
  const Vector fx = evaluate(p.op(), x1);
  if (overflowed(fx)) throw std::invalid_argument("F(x1) overflows; pick a different x1");
  const double radius = fx.norm() / gamma;
  if (radius == 0.0) {
    // F(x1) = 0 solves the VI outright; the unrestricted step is zero.
    auto report = gpm_variable(p, x1, schedule, stop);
    report.restriction_radius = 0.0;
    return report;
  }

  ConvexSet restricted = intersect_with_ball(p.set(), x1, radius);
  std::optional<ViProblem> sub;
  try {
    sub.emplace(restricted, p.op(), p.reference_solution());
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(
        "reference solution is not a solution on the restricted set; gamma is not a valid "
        "modulus for this operator");
  }
  auto report = iterate(*sub, x1, schedule, stop, gamma);
  report.restriction_radius = radius;
  report.restricted_set = std::move(restricted);
  return report;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "Converged";
    case Termination::MaxIters:
      return "MaxIters";
    case Termination::Diverged:
      return "Diverged";
  }
  return "unknown";
}

std::string to_string(ConvergedBy c) { return c == ConvergedBy::Step ? "step" : "residual"; }

std::string to_string(DivergenceCause c) {
  return c == DivergenceCause::Overflow ? "overflow" : "radius";
}

}  // namespace vigp
