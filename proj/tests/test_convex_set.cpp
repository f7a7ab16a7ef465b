#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "vigp/convex_set.hpp"
#include "vigp/sampling.hpp"

using namespace vigp;
using vigp::testing::random_vector;
using vigp::testing::vec;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<std::string, ConvexSet>> closed_form_sets() {
  return {
      {"box", ConvexSet::box(vec({-1, 0, 2}), vec({1, 0.5, 4}))},
      {"half_open_box", ConvexSet::box(vec({-kInf, 0}), vec({1, kInf}))},
      {"ball", ConvexSet::ball(vec({0.5, -1, 2}), 1.5)},
      {"halfspace", ConvexSet::halfspace(vec({1, -2, 0.5}), 0.7)},
      {"simplex", ConvexSet::simplex(4)},
      {"full_space", ConvexSet::full_space(3)},
  };
}

// Points of S for the variational check: projections of random points.
Vector point_in(const ConvexSet& s, std::mt19937_64& rng) {
  return project(s, random_vector(rng, s.dim(), 4.0));
}

}  // namespace

TEST_CASE("projection examples") {
  CHECK(project(ConvexSet::interval(-1, 1), vec({2.0}))[0] == 1.0);
  const Vector ball = project(ConvexSet::ball(vec({0, 0}), 1.0), vec({3, 4}));
  CHECK(ball[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(ball[1] == doctest::Approx(0.8).epsilon(1e-15));
  const Vector s = project(ConvexSet::simplex(3), vec({0.5, 0.5, 0.5}));
  for (Index i = 0; i < 3; ++i) CHECK(s[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto k = ConvexSet::intersection(
      {ConvexSet::box(vec({0, 0}), vec({2, 2})), ConvexSet::ball(vec({2, 0}), 1.0)});
  const Vector p = project(k, vec({0, 0}));
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(p[1]) < 1e-9);
}

TEST_CASE("simplex projection against hand values") {
  const Vector p = project(ConvexSet::simplex(3), vec({2, 0, 0}));
  CHECK((p - vec({1, 0, 0})).norm() < 1e-15);
  const Vector q = project(ConvexSet::simplex(3), vec({0.6, 0.5, -3}));
  CHECK((q - vec({0.55, 0.45, 0})).norm() < 1e-15);
}

TEST_CASE("halfspace projection moves along the normal") {
  const auto h = ConvexSet::halfspace(vec({0, 2}), 2.0);  // y <= 1
  CHECK((project(h, vec({3, 5})) - vec({3, 1})).norm() < 1e-15);
  CHECK((project(h, vec({3, -5})) - vec({3, -5})).norm() == 0.0);
}

TEST_CASE("contains examples") {
  CHECK(contains(ConvexSet::interval(-1, 1), vec({1.0}), 0.0));
  CHECK_FALSE(contains(ConvexSet::ball(vec({0, 0}), 1.0), vec({1.1, 0}), 0.0));
  CHECK(contains(ConvexSet::simplex(3), vec({0.3, 0.3, 0.4}), 1e-12));
  CHECK_FALSE(contains(ConvexSet::simplex(3), vec({0.3, 0.3, 0.3}), 1e-12));
  CHECK_THROWS_AS(contains(ConvexSet::simplex(3), vec({1, 0}), 0.0), DimensionError);
}

TEST_CASE("intersect_with_ball structure") {
  const auto full = intersect_with_ball(ConvexSet::full_space(1), vec({0}), 2.0);
  REQUIRE(full.get_if<Ball>() != nullptr);
  CHECK(full.get_if<Ball>()->radius == 2.0);

  const auto box = ConvexSet::interval(-1, 1);
  const auto k = intersect_with_ball(box, vec({0}), 3.0);
  REQUIRE(k.get_if<Intersection>() != nullptr);
  CHECK(k.get_if<Intersection>()->members.size() == 2);
  CHECK(k.get_if<Intersection>()->members[0] == box);

  const auto ab = ConvexSet::intersection({ConvexSet::ball(vec({0, 0}), 2), ConvexSet::simplex(2)});
  const auto abc = intersect_with_ball(ab, vec({1, 0}), 0.5);
  REQUIRE(abc.get_if<Intersection>() != nullptr);
  CHECK(abc.get_if<Intersection>()->members.size() == 3);
  CHECK(abc.get_if<Intersection>()->members[2].kind() == "ball");
}

TEST_CASE("factories reject invalid sets") {
  CHECK_THROWS(ConvexSet::box(vec({1}), vec({0})));
  CHECK_THROWS_AS(ConvexSet::box(vec({0, 0}), vec({1})), DimensionError);
  CHECK_THROWS(ConvexSet::ball(vec({0}), 0.0));
  CHECK_THROWS(ConvexSet::ball(vec({0}), -1.0));
  CHECK_THROWS(ConvexSet::halfspace(vec({0, 0}), 1.0));
  CHECK_THROWS(ConvexSet::simplex(0));
  CHECK_THROWS(ConvexSet::intersection({ConvexSet::simplex(2)}));
  CHECK_THROWS_AS(ConvexSet::intersection({ConvexSet::simplex(2), ConvexSet::simplex(3)}),
                  DimensionError);
}

TEST_CASE("project rejects dimension mismatch") {
  CHECK_THROWS_AS(project(ConvexSet::ball(vec({0, 0}), 1), vec({1, 2, 3})), DimensionError);
}

TEST_CASE("empty intersection raises ProjectionError") {
  const auto k = ConvexSet::intersection(
      {ConvexSet::ball(vec({0, 0}), 1.0), ConvexSet::ball(vec({5, 0}), 1.0)});
  CHECK_THROWS_AS(project(k, vec({2, 1})), ProjectionError);
}

TEST_CASE("closed-form projections satisfy the projection properties") {
  std::mt19937_64 rng(42);
  for (const auto& [name, s] : closed_form_sets()) {
    CAPTURE(name);
    double worst_idem = 0, worst_var = -kInf, worst_expand = -kInf;
    bool members = true;
    for (int t = 0; t < 2000; ++t) {
      const Vector x = random_vector(rng, s.dim(), 5.0);
      const Vector y = random_vector(rng, s.dim(), 5.0);
      const Vector px = project(s, x);
      const Vector py = project(s, y);
      worst_idem = std::max(worst_idem, (project(s, px) - px).norm());
      worst_expand = std::max(worst_expand, (px - py).norm() - (x - y).norm());
      const Vector z = point_in(s, rng);
      worst_var = std::max(worst_var, (x - px).dot(z - px));
      members = members && contains(s, px, 1e-8);
    }
    CHECK(worst_idem <= 1e-12);
    CHECK(worst_var <= 1e-10);
    CHECK(worst_expand <= 1e-10);
    CHECK(members);
  }
}

TEST_CASE("Dykstra projections satisfy the projection properties") {
  std::mt19937_64 rng(7);
  const std::vector<ConvexSet> sets = {
      ConvexSet::intersection({ConvexSet::box(vec({0, 0}), vec({2, 2})), ConvexSet::ball(vec({2, 0}), 1.0)}),
      ConvexSet::intersection({ConvexSet::simplex(3), ConvexSet::ball(vec({1, 0, 0}), 0.8)}),
      ConvexSet::intersection({ConvexSet::halfspace(vec({1, 1}), 0.5), ConvexSet::ball(vec({0, 0}), 1.0),
                               ConvexSet::box(vec({-0.8, -2}), vec({2, 2}))}),
  };
  for (const auto& s : sets) {
    double worst_var = -kInf, worst_expand = -kInf, worst_idem = 0;
    for (int t = 0; t < 300; ++t) {
      const Vector x = random_vector(rng, s.dim(), 3.0);
      const Vector y = random_vector(rng, s.dim(), 3.0);
      const Vector px = project(s, x);
      const Vector py = project(s, y);
      worst_idem = std::max(worst_idem, (project(s, px) - px).norm());
      worst_expand = std::max(worst_expand, (px - py).norm() - (x - y).norm());
      worst_var = std::max(worst_var, (x - px).dot(project(s, random_vector(rng, s.dim(), 3.0)) - px));
      CHECK(contains(s, px, 1e-8));
    }
    CHECK(worst_idem <= 1e-8);
    CHECK(worst_var <= 1e-9);
    CHECK(worst_expand <= 1e-8);
  }
}

TEST_CASE("Dykstra agrees with a dense grid on box-ball instances") {
  const auto k = ConvexSet::intersection(
      {ConvexSet::box(vec({0, 0}), vec({2, 2})), ConvexSet::ball(vec({2, 0}), 1.0)});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Vector x = random_vector(rng, 2, 3.0);
    double best = kInf;
    for (int i = 0; i <= 2000; ++i) {
      for (int j = 0; j <= 1000; ++j) {
        const Vector y = vec({i * 1e-3, j * 1e-3});
        if ((y - vec({2, 0})).norm() > 1.0) continue;
        best = std::min(best, (y - x).norm());
      }
    }
    // Grid minimizers are ill-conditioned along the arc, so compare distances.
    const double d = (project(k, x) - x).norm();
    CHECK(d <= best + 1e-9);
    CHECK(best - d <= 1.5e-3);
  }
}

TEST_CASE("bounding boxes and boundedness") {
  CHECK(ConvexSet::simplex(3).is_bounded());
  CHECK_FALSE(ConvexSet::full_space(2).is_bounded());
  CHECK_FALSE(ConvexSet::halfspace(vec({1, 0}), 0).is_bounded());
  const auto k = intersect_with_ball(ConvexSet::full_space(1), vec({2}), 8.0);
  const auto bb = k.bounding_box();
  REQUIRE(bb);
  CHECK(bb->first[0] == -6.0);
  CHECK(bb->second[0] == 10.0);
}

TEST_CASE("region sampler stays inside and is seed deterministic") {
  const auto region = ConvexSet::ball(vec({1, 1}), 0.5);
  RegionSampler a(region, 11), b(region, 11);
  for (int t = 0; t < 500; ++t) {
    const Vector x = a.next();
    CHECK(contains(region, x, 0.0));
    CHECK(same_vector(x, b.next()));
  }
  CHECK_THROWS(RegionSampler(ConvexSet::full_space(1), 0));
}

TEST_CASE("region sampler covers a simplex") {
  const auto region = ConvexSet::simplex(3);
  RegionSampler a(region, 4);
  Vector mean = Vector::Zero(3);
  for (int t = 0; t < 3000; ++t) {
    const Vector x = a.next();
    CHECK(contains(region, x, 1e-12));
    mean += x / 3000.0;
  }
  CHECK((mean - Vector::Constant(3, 1.0 / 3.0)).norm() < 0.03);
}
