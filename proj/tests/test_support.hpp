#pragma once

#include "gard/types.hpp"

#include <random>

namespace gard::testing {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = dist(gen);
  return a;
}

inline Vector random_vector(Index n, std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
  return random_matrix(n, 1, gen, lo, hi);
}

}  // namespace gard::testing
