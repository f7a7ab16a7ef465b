#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vigp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Membership tolerance used for every "x in K" precondition.
inline constexpr double kMembershipTol = 1e-9;

inline bool all_finite(const Vector& x) { return x.allFinite(); }

/// Exact element-wise equality, false on size mismatch.
inline bool same_vector(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& what, Index expected, Index got)
      : std::invalid_argument(what + ": expected dimension " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

/// A point violates a membership precondition ("x in K").
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dykstra did not settle; usually an empty intersection.
class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_dim(const char* what, Index expected, Index got) {
  if (expected != got) throw DimensionError(what, expected, got);
}

}  // namespace vigp
