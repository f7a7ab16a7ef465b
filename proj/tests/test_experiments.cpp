#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "vigp/experiments.hpp"

using namespace vigp;
using vigp::testing::vec;

TEST_CASE("active-set oracle examples") {
  CHECK(oracle_solve_affine_box(Matrix::Identity(1, 1), vec({-3}), ConvexSet::interval(-1, 1))[0] == 1.0);
  const Vector zero = oracle_solve_affine_box(Matrix::Identity(2, 2), vec({0, 0}),
                                              ConvexSet::box(vec({-1, -1}), vec({1, 1})));
  CHECK(zero.norm() == 0.0);
  const Vector half = oracle_solve_affine_box(2 * Matrix::Identity(2, 2), vec({-1, -1}),
                                              ConvexSet::box(vec({0, 0}), vec({10, 10})));
  CHECK((half - vec({0.5, 0.5})).norm() < 1e-15);
  CHECK_THROWS(oracle_solve_affine_box(Matrix::Identity(9, 9), Vector::Zero(9),
                                       ConvexSet::box(Vector::Constant(9, -1), Vector::Constant(9, 1))));
}

TEST_CASE("grid oracle examples") {
  CHECK(std::abs(oracle_solve_grid(example_41_problem(), 10000)[0]) <= 1e-8);
  const ViProblem restricted(ConvexSet::interval(-6, 10), OperatorSpec::exp_growth_1d());
  CHECK(std::abs(oracle_solve_grid(restricted, 10000)[0]) <= 1e-8);
  const ViProblem shifted(ConvexSet::interval(-1, 1), OperatorSpec::affine(Matrix::Identity(1, 1), vec({-3})));
  CHECK(std::abs(oracle_solve_grid(shifted, 10000)[0] - 1.0) <= 1e-8);
  CHECK_THROWS(oracle_solve_grid(example_42_problem(), 100));
}

TEST_CASE("oracles agree on the affine box suite") {
  for (const auto& c : affine_box_suite()) {
    CAPTURE(c.name);
    const Vector exact = oracle_solve_affine_box(c.A, c.b, c.box);
    const ViProblem p(c.box, OperatorSpec::affine(c.A, c.b));
    const Vector grid = oracle_solve_grid(p, c.box.dim() == 1 ? 10000 : 2000);
    CHECK((exact - grid).norm() <= 1e-6);
  }
}

TEST_CASE("oscillation verdict records the subsequences") {
  const auto v = reproduce_example_41(0.5, 0.2, 10000);
  REQUIRE(v.odd.size() == 5001);
  REQUIRE(v.even.size() == 5000);
  CHECK(v.odd[0] == 0.2);
  CHECK(v.even[0] == doctest::Approx(-0.24721359549995792).epsilon(1e-15));
  CHECK(v.odd[1] == doctest::Approx(0.24999219237862053).epsilon(1e-15));
  CHECK(v.avoids_origin);
  CHECK(v.final_odd > 0.24);
  CHECK(v.termination == Termination::MaxIters);
  // The odd iterates reach lambda^2 exactly in double precision after a few
  // steps, so the strict checks record where they first fail.
  CHECK(v.first_violation_k.has_value());
  CHECK(v.passed == (v.odd_strictly_increasing && v.odd_in_range && v.even_in_range && v.avoids_origin));
}

TEST_CASE("oscillation experiment input gate") {
  CHECK_THROWS(reproduce_example_41(0.5, 0.3, 100));
  CHECK_THROWS(reproduce_example_41(1.2, 0.3, 100));
  CHECK_THROWS(reproduce_example_41(0.5, 0.0, 100));
}

TEST_CASE("divergence verdict") {
  for (std::size_t iters : {10u, 3u}) {
    const auto v = reproduce_example_42(iters);
    CAPTURE(iters);
    REQUIRE(v.iterates.size() >= 3);
    CHECK(v.iterates[1] == -6.0);
    CHECK(v.iterates[2] == 186.0);
    CHECK(v.growth_bound_holds);
    CHECK(v.passed);
  }
  const auto ten = reproduce_example_42(10);
  CHECK(ten.sentinel_k == 4u);
  CHECK(ten.termination == Termination::Diverged);
  CHECK_THROWS(reproduce_example_42(2));
}

TEST_CASE("rate functions") {
  CHECK(rate_kind_for(1.0) == RateKind::SqrtLogOverK);
  CHECK(rate_kind_for(0.75) == RateKind::PowerHalfMinusP);
  CHECK(rate_kind_for(0.5) == RateKind::PowerMinusHalfP);
  CHECK(rate_kind_for(0.25) == RateKind::PowerMinusHalfP);
  CHECK(rate_function(1.0, 100.0) == doctest::Approx(std::sqrt(std::log(100.0) / 100.0)));
  CHECK(rate_function(0.75, 16.0) == doctest::Approx(0.5));
  CHECK(rate_function(0.5, 16.0) == doctest::Approx(0.5));
  CHECK_THROWS(rate_kind_for(0.0));
}

TEST_CASE("fitting a synthetic power law") {
  std::vector<RateSample> samples;
  for (std::size_t k = 1; k <= 5000; ++k) samples.push_back({k, std::pow(double(k), -0.4)});
  const auto r = analyze_rate(samples, 0.8, 0.5);
  CHECK(r.fitted_slope == doctest::Approx(-0.4).epsilon(1e-6));
  CHECK(r.tail_samples == 2500);
  CHECK_FALSE(r.converged_exactly);
  // error / k^(1/2 - 0.8) = k^(-0.1), largest at the start of the tail.
  CHECK(r.bound_constant == doctest::Approx(std::pow(2501.0, -0.1)));
}

TEST_CASE("exact convergence is reported instead of a slope") {
  std::vector<RateSample> samples;
  for (std::size_t k = 1; k <= 100; ++k) samples.push_back({k, k < 80 ? 1.0 / double(k) : 0.0});
  const auto r = analyze_rate(samples, 1.0, 0.5);
  CHECK(r.converged_exactly);
  CHECK(std::isnan(r.fitted_slope));
  std::vector<RateSample> few(samples.begin(), samples.begin() + 30);
  CHECK_THROWS(analyze_rate(few, 1.0, 0.5));
}

TEST_CASE("rate study on the rescaled benchmark") {
  const auto base = rate_benchmark();
  const ViProblem p(base.set(), rescale_to_half_modulus(base.op(), 1.0), base.reference_solution());

  const auto harmonic = rate_study(p, rate_benchmark_start(), 1.0, 100000);
  CHECK(harmonic.fitted_slope <= -0.35);
  CHECK(harmonic.final_error <= harmonic.bound_constant * rate_function(1.0, 100001.0) + 1e-15);
  CHECK(harmonic.final_error < 1e-2);

  const auto r75 = rate_study(p, rate_benchmark_start(), 0.75, 100000);
  CHECK(std::isfinite(r75.bound_constant));
  CHECK(tail_ratio_max(r75, 0.1) <= tail_ratio_max(r75, 0.5) + 1e-9);
  CHECK(r75.final_error < 1e-2);

  // The rate study rejects problems that were not rescaled.
  CHECK_THROWS(rate_study(base, rate_benchmark_start(), 1.0, 1000));
}

TEST_CASE("tail ratios never grow into later windows") {
  const auto base = rate_benchmark();
  const ViProblem p(base.set(), rescale_to_half_modulus(base.op(), 1.0), base.reference_solution());
  for (double q : {0.25, 0.5, 0.75, 1.0}) {
    CAPTURE(q);
    const auto r = rate_study(p, rate_benchmark_start(), q, 100000);
    CHECK(tail_ratio_max(r, 0.1) <= tail_ratio_max(r, 0.5) + 1e-9);
    CHECK(r.final_error < 1e-2);
  }
}

TEST_CASE("slopes steepen as p decreases on the benchmark") {
  // On x/2 over a box the decay is exp(-k^(1-p) / (2(1-p))), so smaller p is
  // faster; the fitted slopes follow that ordering.
  const auto base = rate_benchmark();
  const ViProblem p(base.set(), rescale_to_half_modulus(base.op(), 1.0), base.reference_solution());
  const auto r50 = rate_study(p, rate_benchmark_start(), 0.5, 100000);
  const auto r75 = rate_study(p, rate_benchmark_start(), 0.75, 100000);
  const auto r100 = rate_study(p, rate_benchmark_start(), 1.0, 100000);
  CHECK(r50.fitted_slope < r75.fitted_slope);
  CHECK(r75.fitted_slope < r100.fitted_slope);
}

TEST_CASE("catalog reference solutions are solutions") {
  const auto catalog = bound_catalog();
  CHECK(catalog.size() >= 10);
  for (const auto& e : catalog) {
    CAPTURE(e.name);
    REQUIRE(e.problem.reference_solution());
    CHECK(is_solution(e.problem, *e.problem.reference_solution(), 1e-8));
  }
}

TEST_CASE("bound sweep is seed deterministic") {
  const auto a = verify_bounds(bound_catalog(), 200, 99);
  const auto b = verify_bounds(bound_catalog(), 200, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].max_violation_normal == b[i].max_violation_normal);
    CHECK(a[i].violations == b[i].violations);
  }
}
