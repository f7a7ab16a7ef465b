#pragma once

#include <random>

#include "vigp/types.hpp"

namespace vigp::testing {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vector random_vector(std::mt19937_64& rng, Index n, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace vigp::testing
