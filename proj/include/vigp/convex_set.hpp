#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vigp/types.hpp"

namespace vigp {

class ConvexSet;

/// Coordinate-wise bounds; entries may be -inf/+inf.
struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius;
};

/// { x : <normal, x> <= offset }
struct Halfspace {
  Vector normal;
  double offset;
};

/// Probability simplex { x >= 0, sum x = 1 }.
struct Simplex {
  Index dim;
};

struct FullSpace {
  Index dim;
};

struct Intersection {
  std::vector<ConvexSet> members;
};

struct DykstraOptions {
  double tolerance = 1e-10;
  int max_iterations = 1000000;
};

/// Immutable closed convex subset of R^n. Construct through the named factories,
/// which validate the per-variant invariants.
class ConvexSet {
 public:
  using Variant = std::variant<Box, Ball, Halfspace, Simplex, FullSpace, Intersection>;

  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet interval(double lower, double upper);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet halfspace(Vector normal, double offset);
  static ConvexSet simplex(Index n);
  static ConvexSet full_space(Index n);
  /// Requires at least two members of equal dimension. Nonemptiness is not checked.
  static ConvexSet intersection(std::vector<ConvexSet> members);

  Index dim() const { return dim_; }
  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  bool is_bounded() const;

  /// Axis-aligned box enclosing the set, when one with finite bounds is known.
  std::optional<std::pair<Vector, Vector>> bounding_box() const;

  /// "box", "ball", "halfspace", "simplex", "full_space" or "intersection".
  std::string kind() const;

  friend bool operator==(const ConvexSet& a, const ConvexSet& b);

 private:
  ConvexSet(Variant v, Index dim) : v_(std::move(v)), dim_(dim) {}

  Variant v_;
  Index dim_;
};

/// Euclidean projection pr_K(x). Closed form for every primitive; Dykstra's
/// alternating projection for intersections.
Vector project(const ConvexSet& set, const Vector& x, const DykstraOptions& opts = {});

/// True iff x violates no defining constraint by more than tol. Halfspace and ball
/// violations are measured as Euclidean distances.
bool contains(const ConvexSet& set, const Vector& x, double tol);

/// set ∩ closed ball(center, radius), flattening nested intersections.
ConvexSet intersect_with_ball(const ConvexSet& set, const Vector& center, double radius);

}  // namespace vigp
