#pragma once

#include <optional>
#include <string>

#include "vigp/convex_set.hpp"
#include "vigp/operator.hpp"

namespace vigp {

/// A reference solution must have natural-map residual at most this.
inline constexpr double kReferenceTol = 1e-8;

/// VI(K, F): find x* in K with <F(x*), x - x*> >= 0 for all x in K.
class ViProblem {
 public:
  /// Throws on dimension mismatch or when the reference solution is not a
  /// solution to within kReferenceTol.
  ViProblem(ConvexSet set, OperatorSpec op, std::optional<Vector> reference_solution = {});

  const ConvexSet& set() const { return set_; }
  const OperatorSpec& op() const { return op_; }
  const std::optional<Vector>& reference_solution() const { return reference_; }
  Index dim() const { return set_.dim(); }

 private:
  ConvexSet set_;
  OperatorSpec op_;
  std::optional<Vector> reference_;
};

/// F_K^nat(x) = x - pr_K(x - F(x)). Requires x in K.
Vector natural_map(const ViProblem& p, const Vector& x);

/// F_K^nor(x) = F(pr_K(x)) + x - pr_K(x). Defined on all of R^n.
Vector normal_map(const ViProblem& p, const Vector& x);

enum class BoundKind {
  NaturalMap,        // |x - x*| <= (L + 1)/gamma |F_K^nat(x)|, x in K
  NormalMap,         // |x* - pr_K(x)| <= |F_K^nor(x)|/gamma, any x
  InteriorResidual,  // |x* - x| <= |F(x)|/gamma, x in K
};

/// Where gamma (and L) came from: the operator's declared constants or the caller.
enum class ConstantSource { Declared, Supplied };

struct ErrorBoundCertificate {
  BoundKind kind;
  Vector evaluation_point;
  double residual_norm;
  double radius;  // asserted bound on |anchor - x*|
  Vector anchor;
  double gamma;
  std::optional<double> lipschitz;
  ConstantSource source;
};

ErrorBoundCertificate error_bound_natural(const ViProblem& p, const Vector& x, double gamma,
                                          double lipschitz);
ErrorBoundCertificate error_bound_normal(const ViProblem& p, const Vector& x, double gamma);
ErrorBoundCertificate error_bound_interior(const ViProblem& p, const Vector& x, double gamma);

// Overloads reading gamma (and L) from the operator's declared constants; they
// throw std::invalid_argument when a needed constant is missing.
ErrorBoundCertificate error_bound_natural(const ViProblem& p, const Vector& x);
ErrorBoundCertificate error_bound_normal(const ViProblem& p, const Vector& x);
ErrorBoundCertificate error_bound_interior(const ViProblem& p, const Vector& x);

/// |F_K^nat(x)| <= tol. Requires x in K.
bool is_solution(const ViProblem& p, const Vector& x, double tol);

std::string to_string(BoundKind kind);
std::string to_string(ConstantSource source);

}  // namespace vigp
