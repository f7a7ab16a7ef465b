#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vigp/vi_problem.hpp"

namespace vigp {

struct ConstantStep {
  double lambda;
};

/// lambda_k = 1 / k^p, 0 < p <= 1.
struct PSeries {
  double p;
};

/// Arbitrary positive sequence with its declared properties.
struct CustomSchedule {
  std::function<double(std::size_t)> generator;
  bool summable;
  bool diminishing;
  std::string label;
};

class StepsizeSchedule {
 public:
  using Variant = std::variant<ConstantStep, PSeries, CustomSchedule>;

  static StepsizeSchedule constant(double lambda);
  static StepsizeSchedule pseries(double p);
  static StepsizeSchedule harmonic() { return pseries(1.0); }
  static StepsizeSchedule custom(std::function<double(std::size_t)> generator, bool summable,
                                 bool diminishing, std::string label = "custom");

  const Variant& variant() const { return v_; }

  /// lambda_k for k >= 1.
  double operator()(std::size_t k) const;

  /// Non-summable and diminishing, as required by the variable-stepsize method.
  bool admissible_for_variable() const;

  std::string describe() const;

 private:
  explicit StepsizeSchedule(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline double stepsize(const StepsizeSchedule& schedule, std::size_t k) { return schedule(k); }

/// Thrown when a schedule violates the variable-stepsize conditions.
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StopCriteria {
  double step_tol = 1e-12;                // stop when |x_{k+1} - x_k| <= step_tol
  std::optional<double> residual_tol;     // stop when |F(x_k)|/gamma <= residual_tol
  std::size_t max_iters = 10000;          // number of projection steps
  double divergence_radius = 1e12;        // |x_k| beyond this is divergence
  std::optional<std::size_t> trace_stride;  // overrides the automatic thinning

  void validate() const;
};

enum class Termination { Converged, MaxIters, Diverged };
enum class ConvergedBy { Step, Residual };
enum class DivergenceCause { Overflow, Radius };

struct IterateRecord {
  std::size_t k;
  double lambda;
  Vector x;
  std::optional<double> step_norm;        // |x_{k+1} - x_k|; absent on the final record
  std::optional<double> dist_ref;         // |x_k - x*| when x* is known
  std::optional<double> interior_radius;  // |F(x_k)|/gamma when gamma is known
};

struct SolveReport {
  std::vector<IterateRecord> iterates;
  Termination termination = Termination::MaxIters;
  std::optional<ConvergedBy> converged_by;
  std::optional<DivergenceCause> divergence_cause;
  Vector final_point;
  std::size_t iterations = 0;  // projection steps performed
  double wall_time = 0.0;      // seconds
  std::optional<double> restriction_radius;
  std::optional<ConvexSet> restricted_set;
  std::vector<std::string> warnings;
};

/// Gradient projection with constant stepsize: x_{k+1} = pr_K(x_k - lambda F(x_k)).
/// A warning is recorded when declared gamma and L put lambda outside (0, 2 gamma/L^2).
SolveReport gpm_constant(const ViProblem& p, const Vector& x1, double lambda,
                         const StopCriteria& stop);

/// Gradient projection with non-summable diminishing stepsizes
/// x_{k+1} = pr_K(x_k - lambda_k F(x_k)), k = 1, 2, ...
SolveReport gpm_variable(const ViProblem& p, const Vector& x1, const StepsizeSchedule& schedule,
                         const StopCriteria& stop);

/// Variable-stepsize method on K' = K ∩ ball(x1, |F(x1)|/gamma), which is bounded
/// and contains the solution whenever gamma is a true strong pseudomonotonicity
/// modulus.
SolveReport gpm_unbounded(const ViProblem& p, const Vector& x1, double gamma,
                          const StepsizeSchedule& schedule, const StopCriteria& stop);

std::string to_string(Termination t);
std::string to_string(ConvergedBy c);
std::string to_string(DivergenceCause c);

}  // namespace vigp
