#ifndef ARBOR_TEST_UTIL_HPP
#define ARBOR_TEST_UTIL_HPP

#include <vector>

#include "arbor/rng.hpp"
#include "arbor/transition_matrix.hpp"

namespace arbor::testutil {

// All entries strictly positive (hence irreducible and aperiodic).
inline TransitionMatrix random_positive_matrix(int n, RngStream& rng,
                                               double min_entry = 0.05) {
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      e[i * n + j] = min_entry + rng.uniform();
      sum += e[i * n + j];
    }
    for (int j = 0; j < n; ++j) e[i * n + j] /= sum;
  }
  return TransitionMatrix(n, std::move(e));
}

// Irreducible with a sprinkling of structural zeros; the cycle
// 1 -> 2 -> ... -> n -> 1 is kept positive so strong connectivity holds.
inline TransitionMatrix random_irreducible_matrix(int n, RngStream& rng,
                                                  double zero_prob = 0.35) {
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    int cycle_next = (i + 1) % n;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != cycle_next && rng.uniform() < zero_prob) continue;
      e[i * n + j] = 0.05 + rng.uniform();
      sum += e[i * n + j];
    }
    for (int j = 0; j < n; ++j) e[i * n + j] /= sum;
  }
  return TransitionMatrix(n, std::move(e));
}

}  // namespace arbor::testutil

#endif
