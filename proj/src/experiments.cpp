#include "vigp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace vigp {

namespace {

constexpr double kBoundSlack = 1e-9;

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

ViProblem example_41_problem() {
  return ViProblem(ConvexSet::interval(-1.0, 1.0), OperatorSpec::sqrt_sign_1d({1.0, {}, 2.0}),
                   Vector::Zero(1));
}

ViProblem example_42_problem() {
  return ViProblem(ConvexSet::full_space(1), OperatorSpec::exp_growth_1d({1.0, {}, {}}),
                   Vector::Zero(1));
}

ViProblem rate_benchmark() {
  auto op = OperatorSpec::affine(Matrix::Identity(2, 2), Vector::Zero(2),
                                 {1.0, 1.0, std::sqrt(2.0)});
  return ViProblem(ConvexSet::box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)),
                   std::move(op), Vector::Zero(2));
}

Vector rate_benchmark_start() { return Vector::Ones(2); }

// ---------------------------------------------------------------------------

Vector oracle_solve_affine_box(const Matrix& A, const Vector& b, const ConvexSet& box) {
  const auto* bx = box.get_if<Box>();
  if (!bx) throw std::invalid_argument("affine box oracle needs a box");
  const Index n = box.dim();
  if (n > 8) throw std::invalid_argument("affine box oracle supports n <= 8");
  require_dim("oracle matrix", n, A.rows());
  require_dim("oracle matrix", n, A.cols());
  require_dim("oracle offset", n, b.size());

  auto clamp = [&](const Vector& v) { return v.cwiseMax(bx->lower).cwiseMin(bx->upper); };

  std::size_t patterns = 1;
  for (Index i = 0; i < n; ++i) patterns *= 3;
  for (std::size_t code = 0; code < patterns; ++code) {
    // state 0: free, 1: at lower bound, 2: at upper bound
    std::vector<int> state(static_cast<std::size_t>(n));
    std::size_t c = code;
    for (Index i = 0; i < n; ++i, c /= 3) state[static_cast<std::size_t>(i)] = static_cast<int>(c % 3);

    Vector x = Vector::Zero(n);
    std::vector<Index> free;
    bool usable = true;
    for (Index i = 0; i < n; ++i) {
      const int s = state[static_cast<std::size_t>(i)];
      if (s == 0) {
        free.push_back(i);
      } else {
        const double bound = s == 1 ? bx->lower[i] : bx->upper[i];
        if (!std::isfinite(bound)) usable = false;
        x[i] = bound;
      }
    }
    if (!usable) continue;

    if (!free.empty()) {
      const Index m = static_cast<Index>(free.size());
      Matrix reduced(m, m);
      Vector rhs(m);
      for (Index r = 0; r < m; ++r) {
        double acc = b[free[r]];
        for (Index j = 0; j < n; ++j) {
          if (state[static_cast<std::size_t>(j)] != 0) acc += A(free[r], j) * x[j];
        }
        rhs[r] = -acc;
        for (Index s = 0; s < m; ++s) reduced(r, s) = A(free[r], free[s]);
      }
      Eigen::FullPivLU<Matrix> lu(reduced);
      if (!lu.isInvertible()) continue;
      const Vector xf = lu.solve(rhs);
      for (Index r = 0; r < m; ++r) x[free[r]] = xf[r];
    }

    const Vector residual = x - clamp(x - (A * x + b));
    if ((x - clamp(x)).norm() <= 1e-12 && residual.norm() <= 1e-10) return clamp(x);
  }
  throw std::runtime_error("no active-set pattern satisfies the VI; is A strongly monotone?");
}

Vector oracle_solve_grid(const ViProblem& p, std::size_t resolution, int rounds) {
  const Index n = p.dim();
  if (n > 2) throw std::invalid_argument("grid oracle supports n <= 2");
  const auto bounds = p.set().bounding_box();
  if (!bounds) throw std::invalid_argument("grid oracle needs a bounded set");
  if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");
  const auto& [lo, hi] = *bounds;

  double best_residual = std::numeric_limits<double>::infinity();
  Vector best = Vector::Zero(n);
  auto consider = [&](const Vector& x) {
    if (!contains(p.set(), x, 0.0)) return;
    const double r = natural_map(p, x).norm();
    if (r < best_residual) {
      best_residual = r;
      best = x;
    }
  };
  auto coordinate = [&](Index axis, std::size_t i) {
    if (i == resolution) return hi[axis];
    return lo[axis] + (hi[axis] - lo[axis]) * static_cast<double>(i) / static_cast<double>(resolution);
  };

  Vector x(n);
  if (n == 1) {
    for (std::size_t i = 0; i <= resolution; ++i) {
      x[0] = coordinate(0, i);
      consider(x);
    }
  } else {
    for (std::size_t i = 0; i <= resolution; ++i) {
      x[0] = coordinate(0, i);
      for (std::size_t j = 0; j <= resolution; ++j) {
        x[1] = coordinate(1, j);
        consider(x);
      }
    }
  }
  if (!std::isfinite(best_residual)) throw std::runtime_error("grid missed the feasible set");

  Vector step = (hi - lo) / static_cast<double>(resolution);
  constexpr int kHalfWidth = 20;  // local grid spans two coarse cells each way
  for (int round = 0; round < rounds; ++round) {
    step /= 10.0;
    const Vector center = best;
    if (n == 1) {
      for (int i = -kHalfWidth; i <= kHalfWidth; ++i) {
        x[0] = center[0] + i * step[0];
        consider(x);
      }
    } else {
      for (int i = -kHalfWidth; i <= kHalfWidth; ++i) {
        for (int j = -kHalfWidth; j <= kHalfWidth; ++j) {
          x[0] = center[0] + i * step[0];
          x[1] = center[1] + j * step[1];
          consider(x);
        }
      }
    }
  }
  return best;
}

std::vector<AffineBoxCase> affine_box_suite() {
  std::vector<AffineBoxCase> cases;
  auto one = [](double a) { return Matrix::Constant(1, 1, a); };
  cases.push_back({"1d_upper_bound", one(1.0), vec({-3.0}), ConvexSet::interval(-1, 1)});
  cases.push_back({"1d_interior", one(2.0), vec({1.0}), ConvexSet::interval(-1, 1)});
  cases.push_back({"1d_lower_bound", one(1.0), vec({0.5}), ConvexSet::interval(0, 2)});
  cases.push_back({"1d_third", one(3.0), vec({-1.0}), ConvexSet::interval(-2, 2)});
  cases.push_back({"2d_origin", Matrix::Identity(2, 2), vec({0.0, 0.0}),
                   ConvexSet::box(vec({-1, -1}), vec({1, 1}))});
  cases.push_back({"2d_diagonal", 2.0 * Matrix::Identity(2, 2), vec({-1.0, -1.0}),
                   ConvexSet::box(vec({0, 0}), vec({2, 2}))});
  cases.push_back({"2d_skew_corner", mat2(2, 1, -1, 2), vec({-5.0, 1.0}),
                   ConvexSet::box(vec({-1, -1}), vec({1, 1}))});
  cases.push_back({"2d_skew_face", mat2(2, 1, -1, 2), vec({-1.0, 0.3}),
                   ConvexSet::box(vec({-1, -1}), vec({0.25, 1}))});
  cases.push_back({"2d_coupled_interior", mat2(3, 1, 1, 2), vec({-1.0, 0.7}),
                   ConvexSet::box(vec({-1, -1}), vec({1, 1}))});
  cases.push_back({"2d_coupled_edge", mat2(3, 1, 1, 2), vec({1.0, -4.0}),
                   ConvexSet::box(vec({0, -1}), vec({1, 1}))});
  return cases;
}

// ---------------------------------------------------------------------------

Example41Verdict reproduce_example_41(double lambda, double x1, std::size_t iters) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0, 1)");
  const double ceiling = lambda * lambda;
  if (!(x1 > 0.0 && x1 < ceiling)) throw std::invalid_argument("x1 must lie in (0, lambda^2)");
  if (iters < 1) throw std::invalid_argument("iters must be positive");

  StopCriteria stop;
  stop.step_tol = 0.0;
  stop.max_iters = iters;
  stop.trace_stride = 1;
  const auto report = gpm_constant(example_41_problem(), Vector::Constant(1, x1), lambda, stop);

  Example41Verdict v{lambda, x1, iters, {}, {}, true, true, true, true, std::nullopt, 0.0,
                     report.termination, false};
  const double epsilon = x1 / 2.0;
  auto violation = [&](std::size_t k) {
    if (!v.first_violation_k) v.first_violation_k = k;
  };
  for (const auto& rec : report.iterates) {
    const double x = rec.x[0];
    if (rec.k % 2 == 1) {
      if (!v.odd.empty() && !(x > v.odd.back())) {
        v.odd_strictly_increasing = false;
        violation(rec.k);
      }
      if (!(x > 0.0 && x < ceiling)) {
        v.odd_in_range = false;
        violation(rec.k);
      }
      v.odd.push_back(x);
    } else {
      if (!(x > -ceiling && x < 0.0)) {
        v.even_in_range = false;
        violation(rec.k);
      }
      v.even.push_back(x);
    }
    if (rec.k >= 2 && !(std::abs(x) > epsilon)) {
      v.avoids_origin = false;
      violation(rec.k);
    }
  }
  v.final_odd = v.odd.back();
  v.passed = v.odd_strictly_increasing && v.odd_in_range && v.even_in_range && v.avoids_origin &&
             v.termination == Termination::MaxIters;
  return v;
}

Example42Verdict reproduce_example_42(std::size_t iters) {
  if (iters < 3) throw std::invalid_argument("iters must be at least 3");
  StopCriteria stop;
  stop.max_iters = iters;
  stop.trace_stride = 1;
  const auto report = gpm_variable(example_42_problem(), Vector::Constant(1, 2.0),
                                   StepsizeSchedule::harmonic(), stop);
  Example42Verdict v{{}, true, std::nullopt, report.termination, false};
  for (const auto& rec : report.iterates) {
    v.iterates.push_back(rec.x[0]);
    if (!(std::abs(rec.x[0]) >= 2.0 * static_cast<double>(rec.k))) v.growth_bound_holds = false;
  }
  if (report.divergence_cause == DivergenceCause::Overflow) v.sentinel_k = report.iterates.back().k;
  v.passed = v.growth_bound_holds && v.termination == Termination::Diverged;
  return v;
}

// ---------------------------------------------------------------------------

RateKind rate_kind_for(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  if (p == 1.0) return RateKind::SqrtLogOverK;
  if (p > 0.5) return RateKind::PowerHalfMinusP;
  return RateKind::PowerMinusHalfP;
}

double rate_function(double p, double k) {
  switch (rate_kind_for(p)) {
    case RateKind::SqrtLogOverK:
      return std::sqrt(std::log(k) / k);
    case RateKind::PowerHalfMinusP:
      return std::pow(k, 0.5 - p);
    case RateKind::PowerMinusHalfP:
      return std::pow(k, -p / 2.0);
  }
  return 0.0;
}

std::string to_string(RateKind kind) {
  switch (kind) {
    case RateKind::SqrtLogOverK:
      return "SqrtLogOverK";
    case RateKind::PowerHalfMinusP:
      return "PowerHalfMinusP";
    case RateKind::PowerMinusHalfP:
      return "PowerMinusHalfP";
  }
  return "unknown";
}

namespace {

std::size_t tail_begin(std::size_t n, double fraction) {
  const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  return n - std::min(n, std::max<std::size_t>(count, 1));
}

}  // namespace

RateStudyResult analyze_rate(std::vector<RateSample> samples, double p, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw std::invalid_argument("tail_fraction must lie in (0, 1)");
  }
  RateStudyResult r;
  r.p = p;
  r.theoretical_rate = rate_kind_for(p);
  const std::size_t begin = tail_begin(samples.size(), tail_fraction);
  r.tail_samples = samples.size() - begin;
  if (r.tail_samples < 20) throw std::invalid_argument("rate fit needs at least 20 tail samples");

  r.bound_constant = 0.0;
  r.converged_exactly = false;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t fitted = 0;
  for (std::size_t i = begin; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double k = static_cast<double>(s.k);
    const double rate = rate_function(p, k);
    if (rate > 0.0) r.bound_constant = std::max(r.bound_constant, s.error / rate);
    if (s.error == 0.0) {
      r.converged_exactly = true;
      continue;
    }
    const double lx = std::log(k), ly = std::log(s.error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++fitted;
  }
  const double m = static_cast<double>(fitted);
  const double denom = m * sxx - sx * sx;
  r.fitted_slope = (r.converged_exactly || fitted < 2 || denom == 0.0)
                       ? std::numeric_limits<double>::quiet_NaN()
                       : (m * sxy - sx * sy) / denom;
  r.final_error = samples.empty() ? 0.0 : samples.back().error;
  r.samples = std::move(samples);
  return r;
}

double tail_ratio_max(const RateStudyResult& result, double fraction) {
  const std::size_t begin = tail_begin(result.samples.size(), fraction);
  double best = 0.0;
  for (std::size_t i = begin; i < result.samples.size(); ++i) {
    const auto& s = result.samples[i];
    const double rate = rate_function(result.p, static_cast<double>(s.k));
    if (rate > 0.0) best = std::max(best, s.error / rate);
  }
  return best;
}

RateStudyResult rate_study(const ViProblem& problem, const Vector& x1, double p_exponent,
                           std::size_t iters, double tail_fraction) {
  const auto& gamma = problem.op().constants().gamma;
  if (!gamma || *gamma != 0.5) {
    throw std::invalid_argument("rate study needs an operator rescaled to modulus 1/2");
  }
  if (!problem.reference_solution()) throw std::invalid_argument("rate study needs x*");
  if (!problem.set().is_bounded()) throw std::invalid_argument("rate study needs a bounded K");

  StopCriteria stop;
  stop.step_tol = 0.0;
  stop.max_iters = iters;
  const auto report = gpm_variable(problem, x1, StepsizeSchedule::pseries(p_exponent), stop);

  std::vector<RateSample> samples;
  samples.reserve(report.iterates.size());
  for (const auto& rec : report.iterates) samples.push_back({rec.k, *rec.dist_ref});
  auto result = analyze_rate(std::move(samples), p_exponent, tail_fraction);
  result.termination = report.termination;
  return result;
}

// ---------------------------------------------------------------------------

std::vector<CatalogProblem> bound_catalog() {
  std::vector<CatalogProblem> out;
  auto add = [&](std::string name, ConvexSet set, OperatorSpec op, Vector xstar, double gamma,
                 std::optional<double> lipschitz, Vector lo, Vector hi) {
    out.push_back({std::move(name), ViProblem(std::move(set), std::move(op), std::move(xstar)),
                   gamma, lipschitz, std::move(lo), std::move(hi)});
  };
  const Matrix skew = mat2(2, 1, -1, 2);
  const Vector skew_b = vec({-5.0, 1.0});
  const auto square = ConvexSet::box(vec({-1, -1}), vec({1, 1}));
  const Vector skew_solution = oracle_solve_affine_box(skew, skew_b, square);

  add("example_4_1", ConvexSet::interval(-1, 1), OperatorSpec::sqrt_sign_1d(), vec({0.0}), 1.0,
      std::nullopt, vec({-3}), vec({3}));
  add("example_4_2_restricted", ConvexSet::interval(-6, 10), OperatorSpec::exp_growth_1d(),
      vec({0.0}), 1.0, std::exp2(10.0) * (1.0 + 10.0 * std::log(2.0)), vec({-12}), vec({16}));
  add("affine_1d_upper", ConvexSet::interval(-1, 1),
      OperatorSpec::affine(Matrix::Identity(1, 1), vec({-3.0})), vec({1.0}), 1.0, 1.0, vec({-4}),
      vec({4}));
  add("affine_2d_diagonal", ConvexSet::box(vec({0, 0}), vec({10, 10})),
      OperatorSpec::affine(2.0 * Matrix::Identity(2, 2), vec({-1.0, -1.0})), vec({0.5, 0.5}), 2.0,
      2.0, vec({-5, -5}), vec({15, 15}));
  add("affine_ball", ConvexSet::ball(Vector::Zero(2), 1.0),
      OperatorSpec::affine(Matrix::Identity(2, 2), Vector::Zero(2)), Vector::Zero(2), 1.0, 1.0,
      vec({-3, -3}), vec({3, 3}));
  add("affine_2d_skew", square, OperatorSpec::affine(skew, skew_b), skew_solution, 2.0,
      std::sqrt(5.0), vec({-3, -3}), vec({3, 3}));
  add("scaled_affine_norm", square,
      OperatorSpec::scaled_affine(Matrix::Identity(2, 2), vec({-3.0, 0.5}),
                                  {ScalingKind::OnePlusNormSquared, 1.0}),
      vec({1.0, -0.5}), 1.0, std::nullopt, vec({-3, -3}), vec({3, 3}));
  add("scaled_affine_sin", square,
      OperatorSpec::scaled_affine(skew, skew_b, {ScalingKind::TwoPlusSinFirst, 1.0}), skew_solution,
      2.0, std::nullopt, vec({-3, -3}), vec({3, 3}));
  add("affine_simplex", ConvexSet::simplex(3),
      OperatorSpec::affine(Matrix::Identity(3, 3), vec({-1.0, -0.5, 0.0})), vec({0.75, 0.25, 0.0}),
      1.0, 1.0, vec({-2, -2, -2}), vec({2, 2, 2}));
  add("affine_halfspace", ConvexSet::halfspace(vec({1.0, 1.0}), 1.0),
      OperatorSpec::affine(Matrix::Identity(2, 2), vec({-2.0, -2.0})), vec({0.5, 0.5}), 1.0, 1.0,
      vec({-3, -3}), vec({4, 4}));
  add("affine_box_ball",
      ConvexSet::intersection({ConvexSet::box(vec({0, 0}), vec({2, 2})),
                               ConvexSet::ball(vec({2.0, 0.0}), 1.0)}),
      OperatorSpec::affine(Matrix::Identity(2, 2), Vector::Zero(2)), vec({1.0, 0.0}), 1.0, 1.0,
      vec({-1, -2}), vec({4, 3}));
  return out;
}

std::vector<BoundSweepEntry> verify_bounds(const std::vector<CatalogProblem>& catalog,
                                           std::size_t points, std::uint64_t seed) {
  std::vector<BoundSweepEntry> out;
  for (const auto& entry : catalog) {
    const auto& p = entry.problem;
    const Vector& xstar = *p.reference_solution();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    BoundSweepEntry result{entry.name, points, 0.0, 0.0, std::nullopt, 0};
    if (entry.lipschitz) result.max_violation_natural = 0.0;
    auto record = [&](double distance, double radius, double& worst) {
      const double excess = distance - radius;
      worst = std::max(worst, excess);
      if (excess > kBoundSlack) ++result.violations;
    };

    for (std::size_t i = 0; i < points; ++i) {
      Vector x(p.dim());
      for (Index j = 0; j < x.size(); ++j) {
        x[j] = entry.sample_lower[j] + (entry.sample_upper[j] - entry.sample_lower[j]) * unit(rng);
      }
      const auto normal = error_bound_normal(p, x, entry.gamma);
      record((xstar - normal.anchor).norm(), normal.radius, result.max_violation_normal);

      const Vector inside = normal.anchor;  // pr_K(x)
      const auto interior = error_bound_interior(p, inside, entry.gamma);
      record((xstar - inside).norm(), interior.radius, result.max_violation_interior);

      if (entry.lipschitz) {
        const auto natural = error_bound_natural(p, inside, entry.gamma, *entry.lipschitz);
        record((xstar - inside).norm(), natural.radius, *result.max_violation_natural);
      }
    }
    out.push_back(std::move(result));
  }
  return out;
}

}  // namespace vigp
