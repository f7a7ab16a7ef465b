#pragma once

#include <cstdint>
#include <random>

#include "vigp/convex_set.hpp"

namespace vigp {

/// Uniform samples from a bounded region: draw from the bounding box, reject
/// points outside the region. Simplices are sampled directly. Deterministic for
/// a given seed.
class RegionSampler {
 public:
  RegionSampler(const ConvexSet& region, std::uint64_t seed);

  Vector next();

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  void draw_box(Vector& x);

  const ConvexSet& region_;
  Vector lower_;
  Vector upper_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace vigp
