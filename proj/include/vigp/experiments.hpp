#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vigp/solver.hpp"

namespace vigp {

// ---------------------------------------------------------------------------
// Reference problems

/// SqrtSign1D on [-1, 1]; unique solution 0, strongly monotone with modulus 1.
ViProblem example_41_problem();

/// ExpGrowth1D on R; unique solution 0, strongly monotone with modulus 1.
ViProblem example_42_problem();

/// Affine{I, 0} on [-1, 1]^2 with declared gamma = L = 1, M = sqrt(2), x* = 0.
ViProblem rate_benchmark();
Vector rate_benchmark_start();  // (1, 1)

// ---------------------------------------------------------------------------
// Oracles

/// Solves VI(box, Ax + b) by enumerating all 3^n active-set patterns (each
/// coordinate at its lower bound, upper bound, or free), solving the reduced
/// linear system and accepting the first pattern whose natural-map residual is
/// at most 1e-10. Requires n <= 8 and a positive definite symmetric part.
Vector oracle_solve_affine_box(const Matrix& A, const Vector& b, const ConvexSet& box);

/// Minimizes |F_K^nat| over a grid with `resolution` intervals per axis on the
/// bounding box of K, then zooms in `rounds` times with 10x finer local grids.
/// K must be bounded and n <= 2.
Vector oracle_solve_grid(const ViProblem& p, std::size_t resolution, int rounds = 3);

struct AffineBoxCase {
  std::string name;
  Matrix A;
  Vector b;
  ConvexSet box;
};

/// The 1D/2D affine box problems used for oracle cross-checks.
std::vector<AffineBoxCase> affine_box_suite();

// ---------------------------------------------------------------------------
// Counter-example reproductions

struct Example41Verdict {
  double lambda;
  double x1;
  std::size_t iters;
  std::vector<double> odd;   // x_1, x_3, x_5, ...
  std::vector<double> even;  // x_2, x_4, ...
  bool odd_strictly_increasing;
  bool odd_in_range;        // 0 < x_odd < lambda^2
  bool even_in_range;       // -lambda^2 < x_even < 0
  bool avoids_origin;       // |x_k| > x1/2 for k >= 2
  std::optional<std::size_t> first_violation_k;
  double final_odd;
  Termination termination;
  bool passed;
};

/// Constant-stepsize run on example_41_problem(); requires lambda in (0, 1) and
/// x1 in (0, lambda^2).
Example41Verdict reproduce_example_41(double lambda, double x1, std::size_t iters);

struct Example42Verdict {
  std::vector<double> iterates;  // x_1, x_2, ... up to the divergence point
  bool growth_bound_holds;       // |x_k| >= 2k for every recorded k
  std::optional<std::size_t> sentinel_k;
  Termination termination;
  bool passed;
};

/// Harmonic-stepsize run on example_42_problem() from x1 = 2; requires iters >= 3.
Example42Verdict reproduce_example_42(std::size_t iters);

// ---------------------------------------------------------------------------
// Convergence rates for lambda_k = 1/k^p

enum class RateKind {
  SqrtLogOverK,     // sqrt(ln k / k), p = 1
  PowerHalfMinusP,  // k^(1/2 - p), p in (1/2, 1)
  PowerMinusHalfP,  // k^(-p/2), p in (0, 1/2]
};

RateKind rate_kind_for(double p);
double rate_function(double p, double k);
std::string to_string(RateKind kind);

struct RateSample {
  std::size_t k;
  double error;  // |x_k - x*|
};

struct RateStudyResult {
  double p;
  RateKind theoretical_rate;
  double fitted_slope;     // least squares slope of log error vs log k on the tail; NaN if exact
  double bound_constant;   // max over the tail of error / rate(k)
  bool converged_exactly;  // a tail error was exactly zero
  std::size_t tail_samples;
  double final_error;
  std::vector<RateSample> samples;  // every logged iterate
  std::optional<Termination> termination;
};

/// Fits the tail (last tail_fraction of the samples, at least 20 of them).
RateStudyResult analyze_rate(std::vector<RateSample> samples, double p, double tail_fraction);

/// max of error / rate(k) over the last `fraction` of result.samples.
double tail_ratio_max(const RateStudyResult& result, double fraction);

/// Runs the variable-stepsize method with lambda_k = 1/k^p for `iters` steps
/// (step_tol = 0) and analyzes the logged errors. The operator must declare
/// gamma = 1/2 (see rescale_to_half_modulus) and the problem must carry x*.
RateStudyResult rate_study(const ViProblem& problem, const Vector& x1, double p_exponent,
                           std::size_t iters, double tail_fraction = 0.5);

// ---------------------------------------------------------------------------
// Error-bound sweep

struct CatalogProblem {
  std::string name;
  ViProblem problem;  // always carries x*
  double gamma;       // true strong pseudomonotonicity modulus on K
  std::optional<double> lipschitz;  // set only when F is also strongly monotone with gamma
  Vector sample_lower;  // box used to draw evaluation points in R^n
  Vector sample_upper;
};

std::vector<CatalogProblem> bound_catalog();

struct BoundSweepEntry {
  std::string name;
  std::size_t points;
  double max_violation_normal;    // max(|x* - pr_K(x)| - radius, 0)
  double max_violation_interior;  // over x in K
  std::optional<double> max_violation_natural;
  std::size_t violations;  // distance > radius + 1e-9, all kinds
};

std::vector<BoundSweepEntry> verify_bounds(const std::vector<CatalogProblem>& catalog,
                                           std::size_t points, std::uint64_t seed);

}  // namespace vigp
