#include "vigp/sampling.hpp"

#include <cmath>

namespace vigp {

namespace {
constexpr int kMaxRejections = 10000;
}

RegionSampler::RegionSampler(const ConvexSet& region, std::uint64_t seed)
    : region_(region), rng_(seed) {
  auto box = region.bounding_box();
  if (!box) throw std::invalid_argument("sampling region must be bounded");
  lower_ = std::move(box->first);
  upper_ = std::move(box->second);
}

Vector RegionSampler::next() {
  Vector x(lower_.size());
  if (region_.get_if<Simplex>()) {
    // Normalised exponentials are uniform on the simplex.
    for (Index i = 0; i < x.size(); ++i) x[i] = -std::log1p(-unit_(rng_));
    return x / x.sum();
  }
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    draw_box(x);
    if (contains(region_, x, 0.0)) return x;
  }
  // Flat regions are never hit by rejection; their points come from projection.
  draw_box(x);
  return project(region_, x);
}

void RegionSampler::draw_box(Vector& x) {
  for (Index i = 0; i < x.size(); ++i) {
    x[i] = lower_[i] + (upper_[i] - lower_[i]) * unit_(rng_);
  }
}

}  // namespace vigp
