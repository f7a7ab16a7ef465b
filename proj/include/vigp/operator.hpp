#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "vigp/convex_set.hpp"

namespace vigp {

/// F(x) = A x + b
struct Affine {
  Matrix A;
  Vector b;
};

/// F(x) = 2 sqrt(x) for x >= 0, -2 sqrt(-x) for x < 0. Strongly monotone with
/// modulus 1 on [-1, 1] but not Lipschitz at the origin.
struct SqrtSign1D {};

/// F(x) = 2^|x| x. Strongly monotone with modulus 1 on R, superexponential growth.
struct ExpGrowth1D {};

enum class ScalingKind {
  Constant,            // c(x) = value
  OnePlusNormSquared,  // c(x) = 1 + |x|^2
  TwoPlusSinFirst,     // c(x) = 2 + sin(x_0)
};

struct Scaling {
  ScalingKind kind = ScalingKind::Constant;
  double value = 1.0;  // only used by Constant

  double operator()(const Vector& x) const;
  double lower_bound() const;
};

/// F(x) = c(x) (A x + b) with c >= c_min > 0.
///
/// If <A d, d> >= mu |d|^2, then F is strongly pseudomonotone with modulus
/// c_min * mu: the premise <F(y), x - y> >= 0 gives <A y + b, x - y> >= 0, hence
/// <A x + b, x - y> >= mu |x - y|^2, and multiplying by c(x) >= c_min finishes it.
/// F is generally not monotone, and VI(K, F) has the same solutions as the
/// unscaled affine problem because c > 0.
struct ScaledAffine {
  Matrix A;
  Vector b;
  Scaling scaling;
};

struct DeclaredConstants {
  std::optional<double> gamma;        // strong (pseudo)monotonicity modulus
  std::optional<double> lipschitz;    // Lipschitz constant on K
  std::optional<double> value_bound;  // M with |F(x)| <= M on K

  friend bool operator==(const DeclaredConstants&, const DeclaredConstants&) = default;
};

/// A member of the closed operator catalog, an output multiplier, and optional
/// declared constants. Immutable.
class OperatorSpec {
 public:
  using Family = std::variant<Affine, SqrtSign1D, ExpGrowth1D, ScaledAffine>;

  static OperatorSpec affine(Matrix A, Vector b, DeclaredConstants constants = {});
  static OperatorSpec sqrt_sign_1d(DeclaredConstants constants = {});
  static OperatorSpec exp_growth_1d(DeclaredConstants constants = {});
  static OperatorSpec scaled_affine(Matrix A, Vector b, Scaling scaling,
                                    DeclaredConstants constants = {});

  Index dim() const { return dim_; }
  const Family& family() const { return family_; }
  double scale() const { return scale_; }
  const DeclaredConstants& constants() const { return constants_; }

  /// "affine", "sqrt_sign_1d", "exp_growth_1d" or "scaled_affine".
  std::string kind() const;

  OperatorSpec with_constants(DeclaredConstants constants) const;
  OperatorSpec with_scale(double scale) const;

  friend bool operator==(const OperatorSpec& a, const OperatorSpec& b);

 private:
  OperatorSpec(Family family, Index dim, DeclaredConstants constants);

  Family family_;
  Index dim_;
  double scale_ = 1.0;
  DeclaredConstants constants_;
};

/// Evaluates F(x). ExpGrowth1D saturates to +/-infinity on overflow; see overflowed().
Vector evaluate(const OperatorSpec& op, const Vector& x);

/// True when F(x) carries the overflow sentinel (any infinite coordinate).
bool overflowed(const Vector& fx);

/// Quotients of one sampled pair (x, y), x != y.
struct PairQuotients {
  double monotone;  // <F(x) - F(y), x - y> / |x - y|^2
  bool premise;     // <F(y), x - y> >= 0
  double pseudo;    // <F(x), x - y> / |x - y|^2
};

PairQuotients pair_quotients(const OperatorSpec& op, const Vector& x, const Vector& y);

// The estimators below are one-sided diagnostics over `samples` random pairs
// drawn uniformly from a bounded region. They are not certificates.

/// Minimum monotone quotient; an upper estimate of the strong monotonicity modulus.
double estimate_strong_monotonicity(const OperatorSpec& op, const ConvexSet& region,
                                    std::size_t samples, std::uint64_t seed);

/// Minimum pseudo quotient over pairs satisfying the premise (both orientations of
/// each pair are tried). +infinity when no pair satisfies the premise.
double estimate_strong_pseudomonotonicity(const OperatorSpec& op, const ConvexSet& region,
                                          std::size_t samples, std::uint64_t seed);

struct LipschitzEstimate {
  double value;  // max |F(x) - F(y)| / |x - y|, a lower estimate of L
  bool growing;  // value exceeds the estimate from samples/100 pairs by more than 50%
};

LipschitzEstimate estimate_lipschitz(const OperatorSpec& op, const ConvexSet& region,
                                     std::size_t samples, std::uint64_t seed);

/// max |F(x)| over samples plus the region's extreme points (box corners, ball
/// axis points).
double value_bound(const OperatorSpec& op, const ConvexSet& region, std::size_t samples,
                   std::uint64_t seed);

/// F / (2 gamma): same solutions, declared modulus 1/2, L and M scaled alike.
OperatorSpec rescale_to_half_modulus(const OperatorSpec& op, double gamma);

}  // namespace vigp
