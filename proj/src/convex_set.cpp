#include "vigp/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace vigp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Per-coordinate bounds, possibly infinite.
std::pair<Vector, Vector> coordinate_bounds(const ConvexSet& set) {
  const Index n = set.dim();
  Vector lo = Vector::Constant(n, -kInf);
  Vector hi = Vector::Constant(n, kInf);
  std::visit(Overloaded{
                 [&](const Box& b) {
                   lo = b.lower;
                   hi = b.upper;
                 },
                 [&](const Ball& b) {
                   lo = b.center.array() - b.radius;
                   hi = b.center.array() + b.radius;
                 },
                 [&](const Simplex&) {
                   lo.setZero();
                   hi.setOnes();
                 },
                 [&](const Halfspace&) {},
                 [&](const FullSpace&) {},
                 [&](const Intersection& s) {
                   for (const auto& m : s.members) {
                     auto [mlo, mhi] = coordinate_bounds(m);
                     lo = lo.cwiseMax(mlo);
                     hi = hi.cwiseMin(mhi);
                   }
                 },
             },
             set.variant());
  return {lo, hi};
}

Vector project_simplex(const Vector& v) {
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < n; ++j) {
    cumulative += u[j];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

Vector project_dykstra(const Intersection& s, const Vector& x, const DykstraOptions& opts) {
  const std::size_t m = s.members.size();
  std::vector<Vector> increments(m, Vector::Zero(x.size()));
  Vector current = x;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const Vector start = current;
    double increment_change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector shifted = current + increments[i];
      Vector next = project(s.members[i], shifted, opts);
      Vector next_increment = shifted - next;
      increment_change = std::max(increment_change, (next_increment - increments[i]).norm());
      increments[i] = std::move(next_increment);
      current = std::move(next);
    }
    if ((current - start).norm() > opts.tolerance) continue;
    if (increment_change <= opts.tolerance) return current;
    // Increments can keep migrating between members long after the iterate has
    // settled. If x - current is normal to a single member at a feasible point
    // it is normal to K as well, so the iterate is already optimal.
    const Vector residual = x - current;
    const bool feasible = std::all_of(s.members.begin(), s.members.end(), [&](const ConvexSet& c) {
      return contains(c, current, opts.tolerance);
    });
    if (feasible && std::any_of(s.members.begin(), s.members.end(), [&](const ConvexSet& c) {
          return (project(c, current + residual, opts) - current).norm() <= opts.tolerance;
        })) {
      return current;
    }
  }
  throw ProjectionError("Dykstra projection did not converge within " +
                        std::to_string(opts.max_iterations) +
                        " cycles; the intersection is likely empty");
}

}  // namespace

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  require_dim("box upper bound", lower.size(), upper.size());
  if (lower.size() < 1) throw std::invalid_argument("box dimension must be at least 1");
  for (Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i] ||
        lower[i] == kInf || upper[i] == -kInf) {
      throw std::invalid_argument("box bounds must satisfy lower <= upper at coordinate " +
                                  std::to_string(i));
    }
  }
  const Index n = lower.size();
  return ConvexSet(Box{std::move(lower), std::move(upper)}, n);
}

ConvexSet ConvexSet::interval(double lower, double upper) {
  return box(Vector::Constant(1, lower), Vector::Constant(1, upper));
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() < 1) throw std::invalid_argument("ball dimension must be at least 1");
  if (!all_finite(center)) throw std::invalid_argument("ball center must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be positive and finite");
  }
  const Index n = center.size();
  return ConvexSet(Ball{std::move(center), radius}, n);
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  if (normal.size() < 1) throw std::invalid_argument("halfspace dimension must be at least 1");
  if (!all_finite(normal) || !std::isfinite(offset)) {
    throw std::invalid_argument("halfspace data must be finite");
  }
  if (normal.squaredNorm() == 0.0) throw std::invalid_argument("halfspace normal must be nonzero");
  const Index n = normal.size();
  return ConvexSet(Halfspace{std::move(normal), offset}, n);
}

ConvexSet ConvexSet::simplex(Index n) {
  if (n < 1) throw std::invalid_argument("simplex dimension must be at least 1");
  return ConvexSet(Simplex{n}, n);
}

ConvexSet ConvexSet::full_space(Index n) {
  if (n < 1) throw std::invalid_argument("full space dimension must be at least 1");
  return ConvexSet(FullSpace{n}, n);
}

ConvexSet ConvexSet::intersection(std::vector<ConvexSet> members) {
  if (members.size() < 2) throw std::invalid_argument("intersection needs at least two members");
  const Index n = members.front().dim();
  for (const auto& m : members) require_dim("intersection member", n, m.dim());
  return ConvexSet(Intersection{std::move(members)}, n);
}

bool ConvexSet::is_bounded() const { return bounding_box().has_value(); }

std::optional<std::pair<Vector, Vector>> ConvexSet::bounding_box() const {
  auto bounds = coordinate_bounds(*this);
  if (!all_finite(bounds.first) || !all_finite(bounds.second)) return std::nullopt;
  return bounds;
}

std::string ConvexSet::kind() const {
  return std::visit(Overloaded{
                        [](const Box&) { return std::string("box"); },
                        [](const Ball&) { return std::string("ball"); },
                        [](const Halfspace&) { return std::string("halfspace"); },
                        [](const Simplex&) { return std::string("simplex"); },
                        [](const FullSpace&) { return std::string("full_space"); },
                        [](const Intersection&) { return std::string("intersection"); },
                    },
                    v_);
}

bool operator==(const ConvexSet& a, const ConvexSet& b) {
  if (a.dim_ != b.dim_ || a.v_.index() != b.v_.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Box& x) {
            const auto& y = std::get<Box>(b.v_);
            return same_vector(x.lower, y.lower) && same_vector(x.upper, y.upper);
          },
          [&](const Ball& x) {
            const auto& y = std::get<Ball>(b.v_);
            return same_vector(x.center, y.center) && x.radius == y.radius;
          },
          [&](const Halfspace& x) {
            const auto& y = std::get<Halfspace>(b.v_);
            return same_vector(x.normal, y.normal) && x.offset == y.offset;
          },
          [&](const Simplex&) { return true; },
          [&](const FullSpace&) { return true; },
          [&](const Intersection& x) {
            return x.members == std::get<Intersection>(b.v_).members;
          },
      },
      a.v_);
}

Vector project(const ConvexSet& set, const Vector& x, const DykstraOptions& opts) {
  require_dim("project", set.dim(), x.size());
  return std::visit(Overloaded{
                        [&](const Box& b) -> Vector { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
                        [&](const Ball& b) -> Vector {
                          const Vector d = x - b.center;
                          const double r = d.norm();
                          if (r <= b.radius) return x;
                          return b.center + (b.radius / r) * d;
                        },
                        [&](const Halfspace& h) -> Vector {
                          const double excess = h.normal.dot(x) - h.offset;
                          if (excess <= 0.0) return x;
                          return x - (excess / h.normal.squaredNorm()) * h.normal;
                        },
                        [&](const Simplex&) -> Vector { return project_simplex(x); },
                        [&](const FullSpace&) -> Vector { return x; },
                        [&](const Intersection& s) -> Vector { return project_dykstra(s, x, opts); },
                    },
                    set.variant());
}

bool contains(const ConvexSet& set, const Vector& x, double tol) {
  require_dim("contains", set.dim(), x.size());
  return std::visit(
      Overloaded{
          [&](const Box& b) {
            return ((b.lower.array() - x.array()) <= tol).all() &&
                   ((x.array() - b.upper.array()) <= tol).all();
          },
          [&](const Ball& b) { return (x - b.center).norm() - b.radius <= tol; },
          [&](const Halfspace& h) {
            return (h.normal.dot(x) - h.offset) / h.normal.norm() <= tol;
          },
          [&](const Simplex&) {
            return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
          },
          [&](const FullSpace&) { return all_finite(x); },
          [&](const Intersection& s) {
            return std::all_of(s.members.begin(), s.members.end(),
                               [&](const ConvexSet& m) { return contains(m, x, tol); });
          },
      },
      set.variant());
}

ConvexSet intersect_with_ball(const ConvexSet& set, const Vector& center, double radius) {
  require_dim("intersect_with_ball", set.dim(), center.size());
  ConvexSet ball = ConvexSet::ball(center, radius);
  if (set.get_if<FullSpace>()) return ball;
  std::vector<ConvexSet> members;
  if (const auto* s = set.get_if<Intersection>()) {
    members = s->members;
  } else {
    members.push_back(set);
  }
  members.push_back(std::move(ball));
  return ConvexSet::intersection(std::move(members));
}

}  // namespace vigp
