#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "vigp/experiments.hpp"
#include "vigp/vi_problem.hpp"

using namespace vigp;
using vigp::testing::random_vector;
using vigp::testing::vec;

namespace {

ViProblem shifted_identity() {
  // F(x) = x - 3 on [-1, 1]; x* = 1 sits on the boundary.
  return ViProblem(ConvexSet::interval(-1, 1),
                   OperatorSpec::affine(Matrix::Identity(1, 1), vec({-3}), {1.0, 1.0, std::nullopt}),
                   vec({1}));
}

}  // namespace

TEST_CASE("natural map examples") {
  const auto ex41 = example_41_problem();
  CHECK(natural_map(ex41, vec({0}))[0] == 0.0);
  CHECK(natural_map(ex41, vec({1}))[0] == 2.0);
  CHECK(natural_map(shifted_identity(), vec({1}))[0] == 0.0);
  CHECK_THROWS_AS(natural_map(ex41, vec({1.5})), DomainError);
  CHECK_NOTHROW(natural_map(ex41, vec({1 + 1e-10})));
}

TEST_CASE("normal map examples") {
  const auto ex41 = example_41_problem();
  CHECK(normal_map(ex41, vec({2}))[0] == 3.0);
  const auto p = shifted_identity();
  CHECK(normal_map(p, vec({1}))[0] == -2.0);  // F(x*) at a boundary solution
  const ViProblem full(ConvexSet::full_space(2), OperatorSpec::affine(Matrix{{2, 1}, {0, 3}}, vec({1, -1})));
  const Vector x = vec({0.3, -4});
  CHECK(same_vector(normal_map(full, x), evaluate(full.op(), x)));
}

TEST_CASE("natural-map error bound") {
  const auto p = shifted_identity();
  const auto at_solution = error_bound_natural(p, vec({1}), 1.0, 1.0);
  CHECK(at_solution.radius == 0.0);
  const auto c0 = error_bound_natural(p, vec({0}), 1.0, 1.0);
  CHECK(c0.residual_norm == 1.0);
  CHECK(c0.radius == 2.0);
  CHECK(c0.kind == BoundKind::NaturalMap);
  CHECK(same_vector(c0.anchor, vec({0})));
  const auto c05 = error_bound_natural(p, vec({0.5}), 1.0, 1.0);
  CHECK(c05.radius == 1.0);
  CHECK(c05.source == ConstantSource::Supplied);
  CHECK(error_bound_natural(p, vec({0.5})).source == ConstantSource::Declared);
  CHECK_THROWS(error_bound_natural(example_41_problem(), vec({0.5})));  // no Lipschitz constant
  CHECK_THROWS_AS(error_bound_natural(p, vec({2}), 1.0, 1.0), DomainError);
}

TEST_CASE("normal-map error bound") {
  const auto ex41 = example_41_problem();
  const auto c = error_bound_normal(ex41, vec({2}), 1.0);
  CHECK(c.residual_norm == 3.0);
  CHECK(c.radius == 3.0);
  CHECK(c.anchor[0] == 1.0);
  CHECK(c.lipschitz == std::nullopt);
  CHECK(std::abs(0.0 - c.anchor[0]) <= c.radius);

  const ViProblem interior(ConvexSet::ball(vec({0, 0}), 1), OperatorSpec::affine(Matrix::Identity(2, 2), vec({0, 0})),
                           vec({0, 0}));
  CHECK(error_bound_normal(interior, vec({0, 0}), 1.0).radius == 0.0);
  const auto c2 = error_bound_normal(interior, vec({2, 0}), 1.0);
  CHECK(c2.radius == 2.0);
  CHECK(same_vector(c2.anchor, vec({1, 0})));
  CHECK_THROWS(error_bound_normal(interior, vec({2, 0}), 0.0));
  CHECK_THROWS(error_bound_normal(interior, vec({2, 0})));  // gamma not declared
}

TEST_CASE("interior-residual error bound") {
  CHECK(error_bound_interior(example_41_problem(), vec({0.25}), 1.0).radius == 1.0);
  CHECK(error_bound_interior(example_42_problem(), vec({1}), 1.0).radius == 2.0);
  CHECK(error_bound_interior(example_42_problem(), vec({0}), 1.0).radius == 0.0);
  CHECK_THROWS_AS(error_bound_interior(example_41_problem(), vec({1.5}), 1.0), DomainError);
}

TEST_CASE("is_solution") {
  const auto ex41 = example_41_problem();
  CHECK(is_solution(ex41, vec({0}), 1e-12));
  CHECK_FALSE(is_solution(ex41, vec({0.5}), 1e-12));
  CHECK(natural_map(ex41, vec({0.5})).norm() > 0.1);
  CHECK(is_solution(shifted_identity(), vec({1}), 1e-12));
}

TEST_CASE("problem construction validates the reference solution") {
  CHECK_THROWS(ViProblem(ConvexSet::interval(-1, 1), OperatorSpec::sqrt_sign_1d(), vec({0.5})));
  CHECK_THROWS_AS(ViProblem(ConvexSet::interval(-1, 1), OperatorSpec::affine(Matrix::Identity(2, 2), vec({0, 0}))),
                  DimensionError);
}

TEST_CASE("solution characterizations agree on the catalog") {
  for (const auto& entry : bound_catalog()) {
    CAPTURE(entry.name);
    const auto& p = entry.problem;
    const Vector& xs = *p.reference_solution();
    CHECK(natural_map(p, xs).norm() <= 1e-10);
    const Vector z = xs - evaluate(p.op(), xs);
    CHECK(normal_map(p, z).norm() <= 1e-10);
  }
}

TEST_CASE("normal and interior radii coincide on K") {
  std::mt19937_64 rng(5);
  for (const auto& entry : bound_catalog()) {
    CAPTURE(entry.name);
    const auto& p = entry.problem;
    for (int t = 0; t < 200; ++t) {
      const Vector x = project(p.set(), random_vector(rng, p.dim(), 3.0));
      const double a = error_bound_normal(p, x, entry.gamma).radius;
      const double b = error_bound_interior(p, x, entry.gamma).radius;
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
    }
  }
}

TEST_CASE("bounds hold on the catalog") {
  const auto sweep = verify_bounds(bound_catalog(), 1000, 2024);
  for (const auto& e : sweep) {
    CAPTURE(e.name);
    CHECK(e.violations == 0);
    CHECK(e.max_violation_normal <= 1e-9);
    CHECK(e.max_violation_interior <= 1e-9);
    if (e.max_violation_natural) CHECK(*e.max_violation_natural <= 1e-9);
  }
}

TEST_CASE("normal-map radii shrink toward the solution") {
  std::mt19937_64 rng(13);
  for (const auto& entry : bound_catalog()) {
    CAPTURE(entry.name);
    const auto& p = entry.problem;
    const Vector& xs = *p.reference_solution();
    const Vector z = xs - evaluate(p.op(), xs);  // zero of the normal map
    Vector d = random_vector(rng, p.dim(), 1.0);
    d /= d.norm();
    const double first = error_bound_normal(p, z + d, entry.gamma).radius;
    double previous = first;
    for (double t : {0.1, 0.01, 0.001}) {
      const double r = error_bound_normal(p, z + t * d, entry.gamma).radius;
      CHECK(r <= 10.0 * previous);
      previous = r;
    }
    CHECK(previous <= 0.1 * first);
  }
}
