#include "vigp/vi_problem.hpp"

#include <cmath>

namespace vigp {

namespace {

void require_in_set(const ConvexSet& set, const Vector& x, const char* what) {
  require_dim(what, set.dim(), x.size());
  if (!all_finite(x)) throw std::invalid_argument(std::string(what) + ": point is not finite");
  if (!contains(set, x, kMembershipTol)) {
    throw DomainError(std::string(what) + ": point lies outside K");
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

double declared_gamma(const ViProblem& p) {
  const auto& g = p.op().constants().gamma;
  if (!g) throw std::invalid_argument("operator declares no gamma");
  return *g;
}

}  // namespace

ViProblem::ViProblem(ConvexSet set, OperatorSpec op, std::optional<Vector> reference_solution)
    : set_(std::move(set)), op_(std::move(op)), reference_(std::move(reference_solution)) {
  require_dim("problem operator", set_.dim(), op_.dim());
  if (reference_) {
    const double residual = natural_map(*this, *reference_).norm();
    if (!(residual <= kReferenceTol)) {
      throw std::invalid_argument("reference solution has natural-map residual " +
                                  std::to_string(residual));
    }
  }
}

Vector natural_map(const ViProblem& p, const Vector& x) {
  require_in_set(p.set(), x, "natural_map");
  return x - project(p.set(), x - evaluate(p.op(), x));
}

Vector normal_map(const ViProblem& p, const Vector& x) {
  require_dim("normal_map", p.dim(), x.size());
  const Vector px = project(p.set(), x);
  return evaluate(p.op(), px) + x - px;
}

ErrorBoundCertificate error_bound_natural(const ViProblem& p, const Vector& x, double gamma,
                                          double lipschitz) {
  require_positive(gamma, "gamma");
  require_positive(lipschitz, "lipschitz");
  const double residual = natural_map(p, x).norm();
  return {BoundKind::NaturalMap, x, residual, (lipschitz + 1.0) / gamma * residual, x,
          gamma, lipschitz, ConstantSource::Supplied};
}

ErrorBoundCertificate error_bound_normal(const ViProblem& p, const Vector& x, double gamma) {
  require_positive(gamma, "gamma");
  const double residual = normal_map(p, x).norm();
  return {BoundKind::NormalMap, x, residual, residual / gamma, project(p.set(), x),
          gamma, std::nullopt, ConstantSource::Supplied};
}

ErrorBoundCertificate error_bound_interior(const ViProblem& p, const Vector& x, double gamma) {
  require_positive(gamma, "gamma");
  require_in_set(p.set(), x, "error_bound_interior");
  const double residual = evaluate(p.op(), x).norm();
  return {BoundKind::InteriorResidual, x, residual, residual / gamma, x,
          gamma, std::nullopt, ConstantSource::Supplied};
}

ErrorBoundCertificate error_bound_natural(const ViProblem& p, const Vector& x) {
  const auto& lip = p.op().constants().lipschitz;
  if (!lip) throw std::invalid_argument("operator declares no Lipschitz constant");
  auto cert = error_bound_natural(p, x, declared_gamma(p), *lip);
  cert.source = ConstantSource::Declared;
  return cert;
}

ErrorBoundCertificate error_bound_normal(const ViProblem& p, const Vector& x) {
  auto cert = error_bound_normal(p, x, declared_gamma(p));
  cert.source = ConstantSource::Declared;
  return cert;
}

ErrorBoundCertificate error_bound_interior(const ViProblem& p, const Vector& x) {
  auto cert = error_bound_interior(p, x, declared_gamma(p));
  cert.source = ConstantSource::Declared;
  return cert;
}

bool is_solution(const ViProblem& p, const Vector& x, double tol) {
  return natural_map(p, x).norm() <= tol;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::NaturalMap:
      return "NaturalMap";
    case BoundKind::NormalMap:
      return "NormalMap";
    case BoundKind::InteriorResidual:
      return "InteriorResidual";
  }
  return "unknown";
}

std::string to_string(ConstantSource source) {
  return source == ConstantSource::Declared ? "declared" : "supplied";
}

}  // namespace vigp
