#include "vigp/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vigp/sampling.hpp"

namespace vigp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_affine(const Matrix& A, const Vector& b) {
  if (A.rows() < 1 || A.rows() != A.cols()) throw std::invalid_argument("A must be square");
  require_dim("affine offset b", A.rows(), b.size());
  if (!A.allFinite() || !all_finite(b)) throw std::invalid_argument("affine data must be finite");
}

void validate_constants(const DeclaredConstants& c) {
  auto positive = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v > 0.0 && std::isfinite(*v))) {
      throw std::invalid_argument(std::string("declared ") + name + " must be positive");
    }
  };
  positive(c.gamma, "gamma");
  positive(c.lipschitz, "lipschitz");
  positive(c.value_bound, "value_bound");
}

double sqrt_sign(double x) { return x >= 0.0 ? 2.0 * std::sqrt(x) : -2.0 * std::sqrt(-x); }

double exp_growth(double x) {
  const double magnitude = std::exp2(std::abs(x));
  const double v = magnitude * x;
  if (!std::isfinite(v)) return x >= 0.0 ? kInf : -kInf;
  return v;
}

}  // namespace

double Scaling::operator()(const Vector& x) const {
  switch (kind) {
    case ScalingKind::Constant:
      return value;
    case ScalingKind::OnePlusNormSquared:
      return 1.0 + x.squaredNorm();
    case ScalingKind::TwoPlusSinFirst:
      return 2.0 + std::sin(x[0]);
  }
  return value;
}

double Scaling::lower_bound() const {
  switch (kind) {
    case ScalingKind::Constant:
      return value;
    case ScalingKind::OnePlusNormSquared:
    case ScalingKind::TwoPlusSinFirst:
      return 1.0;
  }
  return value;
}

OperatorSpec::OperatorSpec(Family family, Index dim, DeclaredConstants constants)
    : family_(std::move(family)), dim_(dim), constants_(constants) {
  validate_constants(constants_);
}

OperatorSpec OperatorSpec::affine(Matrix A, Vector b, DeclaredConstants constants) {
  validate_affine(A, b);
  const Index n = A.rows();
  return OperatorSpec(Affine{std::move(A), std::move(b)}, n, constants);
}

OperatorSpec OperatorSpec::sqrt_sign_1d(DeclaredConstants constants) {
  return OperatorSpec(SqrtSign1D{}, 1, constants);
}

OperatorSpec OperatorSpec::exp_growth_1d(DeclaredConstants constants) {
  return OperatorSpec(ExpGrowth1D{}, 1, constants);
}

OperatorSpec OperatorSpec::scaled_affine(Matrix A, Vector b, Scaling scaling,
                                         DeclaredConstants constants) {
  validate_affine(A, b);
  if (!(scaling.lower_bound() > 0.0) || !std::isfinite(scaling.value)) {
    throw std::invalid_argument("scaling lower bound c_min must be positive");
  }
  const Index n = A.rows();
  return OperatorSpec(ScaledAffine{std::move(A), std::move(b), scaling}, n, constants);
}

std::string OperatorSpec::kind() const {
  return std::visit(Overloaded{
                        [](const Affine&) { return std::string("affine"); },
                        [](const SqrtSign1D&) { return std::string("sqrt_sign_1d"); },
                        [](const ExpGrowth1D&) { return std::string("exp_growth_1d"); },
                        [](const ScaledAffine&) { return std::string("scaled_affine"); },
                    },
                    family_);
}

OperatorSpec OperatorSpec::with_constants(DeclaredConstants constants) const {
  validate_constants(constants);
  OperatorSpec out = *this;
  out.constants_ = constants;
  return out;
}

OperatorSpec OperatorSpec::with_scale(double scale) const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("operator scale must be positive");
  }
  OperatorSpec out = *this;
  out.scale_ = scale;
  return out;
}

bool operator==(const OperatorSpec& a, const OperatorSpec& b) {
  if (a.dim_ != b.dim_ || a.scale_ != b.scale_ || !(a.constants_ == b.constants_) ||
      a.family_.index() != b.family_.index()) {
    return false;
  }
  return std::visit(Overloaded{
                        [&](const Affine& x) {
                          const auto& y = std::get<Affine>(b.family_);
                          return x.A == y.A && same_vector(x.b, y.b);
                        },
                        [&](const SqrtSign1D&) { return true; },
                        [&](const ExpGrowth1D&) { return true; },
                        [&](const ScaledAffine& x) {
                          const auto& y = std::get<ScaledAffine>(b.family_);
                          return x.A == y.A && same_vector(x.b, y.b) &&
                                 x.scaling.kind == y.scaling.kind &&
                                 x.scaling.value == y.scaling.value;
                        },
                    },
                    a.family_);
}

Vector evaluate(const OperatorSpec& op, const Vector& x) {
  require_dim("evaluate", op.dim(), x.size());
  Vector fx = std::visit(Overloaded{
                             [&](const Affine& f) -> Vector { return f.A * x + f.b; },
                             [&](const SqrtSign1D&) -> Vector {
                               return Vector::Constant(1, sqrt_sign(x[0]));
                             },
                             [&](const ExpGrowth1D&) -> Vector {
                               return Vector::Constant(1, exp_growth(x[0]));
                             },
                             [&](const ScaledAffine& f) -> Vector {
                               return f.scaling(x) * (f.A * x + f.b);
                             },
                         },
                         op.family());
  if (op.scale() != 1.0) fx *= op.scale();
  return fx;
}

bool overflowed(const Vector& fx) { return (fx.array().abs() == kInf).any(); }

PairQuotients pair_quotients(const OperatorSpec& op, const Vector& x, const Vector& y) {
  const Vector fx = evaluate(op, x);
  const Vector fy = evaluate(op, y);
  const Vector d = x - y;
  const double d2 = d.squaredNorm();
  return {(fx - fy).dot(d) / d2, fy.dot(d) >= 0.0, fx.dot(d) / d2};
}

namespace {

template <class Visit>
void for_each_pair(const ConvexSet& region, std::size_t samples, std::uint64_t seed, Visit&& visit) {
  RegionSampler sampler(region, seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Vector x = sampler.next();
    const Vector y = sampler.next();
    if (same_vector(x, y)) continue;
    visit(x, y);
  }
}

void require_pairs(std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("estimators need at least 2 samples");
}

double lipschitz_over(const OperatorSpec& op, const ConvexSet& region, std::size_t samples,
                      std::uint64_t seed) {
  double best = 0.0;
  for_each_pair(region, samples, seed, [&](const Vector& x, const Vector& y) {
    const double q = (evaluate(op, x) - evaluate(op, y)).norm() / (x - y).norm();
    best = std::max(best, q);
  });
  return best;
}

}  // namespace

double estimate_strong_monotonicity(const OperatorSpec& op, const ConvexSet& region,
                                    std::size_t samples, std::uint64_t seed) {
  require_pairs(samples);
  require_dim("estimator region", op.dim(), region.dim());
  double best = kInf;
  for_each_pair(region, samples, seed, [&](const Vector& x, const Vector& y) {
    best = std::min(best, pair_quotients(op, x, y).monotone);
  });
  return std::max(best, 0.0);
}

double estimate_strong_pseudomonotonicity(const OperatorSpec& op, const ConvexSet& region,
                                          std::size_t samples, std::uint64_t seed) {
  require_pairs(samples);
  require_dim("estimator region", op.dim(), region.dim());
  double best = kInf;
  for_each_pair(region, samples, seed, [&](const Vector& x, const Vector& y) {
    for (const auto& q : {pair_quotients(op, x, y), pair_quotients(op, y, x)}) {
      if (q.premise) best = std::min(best, q.pseudo);
    }
  });
  return best == kInf ? kInf : std::max(best, 0.0);
}

LipschitzEstimate estimate_lipschitz(const OperatorSpec& op, const ConvexSet& region,
                                     std::size_t samples, std::uint64_t seed) {
  require_pairs(samples);
  require_dim("estimator region", op.dim(), region.dim());
  const double full = lipschitz_over(op, region, samples, seed);
  const std::size_t coarse_samples = std::max<std::size_t>(2, (samples + 99) / 100);
  const double coarse = lipschitz_over(op, region, coarse_samples, seed);
  return {full, full > 1.5 * coarse};
}

double value_bound(const OperatorSpec& op, const ConvexSet& region, std::size_t samples,
                   std::uint64_t seed) {
  require_dim("estimator region", op.dim(), region.dim());
  RegionSampler sampler(region, seed);
  double best = 0.0;
  auto consider = [&](const Vector& x) { best = std::max(best, evaluate(op, x).norm()); };

  const Index n = region.dim();
  if (const auto* box = region.get_if<Box>(); box && n <= 20) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      Vector corner(n);
      for (Index i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? box->upper[i] : box->lower[i];
      consider(corner);
    }
  } else if (const auto* ball = region.get_if<Ball>()) {
    for (Index i = 0; i < n; ++i) {
      for (double sign : {-1.0, 1.0}) {
        Vector p = ball->center;
        p[i] += sign * ball->radius;
        consider(p);
      }
    }
  }
  for (std::size_t i = 0; i < samples; ++i) consider(sampler.next());
  return best;
}

OperatorSpec rescale_to_half_modulus(const OperatorSpec& op, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  const double factor = 1.0 / (2.0 * gamma);
  DeclaredConstants c = op.constants();
  c.gamma = 0.5;
  if (c.lipschitz) *c.lipschitz *= factor;
  if (c.value_bound) *c.value_bound *= factor;
  return op.with_scale(op.scale() * factor).with_constants(c);
}

}  // namespace vigp
