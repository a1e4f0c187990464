#ifndef ARBOR_TRANSITION_MATRIX_HPP
#define ARBOR_TRANSITION_MATRIX_HPP

#include <vector>

#include "arbor/rng.hpp"

namespace arbor {

// Row-stochastic transition matrix over states 1..n. Entries are
// validated to lie in [0,1] at construction; row sums are checked
// separately by validate() so ill-formed inputs can still be reported.
class TransitionMatrix {
 public:
  TransitionMatrix(int n, std::vector<double> entries);

  int size() const { return n_; }

  // 1-based state indices throughout.
  double operator()(int i, int j) const { return entries_[(i - 1) * n_ + (j - 1)]; }

  const std::vector<double>& entries() const { return entries_; }

 private:
  int n_;
  std::vector<double> entries_;  // row-major
};

struct ValidationReport {
  bool row_stochastic = false;
  bool irreducible = false;
  bool aperiodic = false;
  bool assumption_a = false;  // p_{1j} > 0 for all j
  int period = 0;             // gcd of cycle lengths in the class of state 1
};

struct Distribution {
  std::vector<double> probs;  // probs[i-1] is the mass of state i
};

ValidationReport validate(const TransitionMatrix& p, double tol = 1e-9);

// Unique stationary distribution of an irreducible chain, by direct
// linear solve of pi P = pi with the normalization row substituted in.
Distribution stationary_solve(const TransitionMatrix& p);

// (1/n) * sum_{k=1..n} P^k. All entries strictly positive when P is
// irreducible.
TransitionMatrix averaged_matrix(const TransitionMatrix& p);

// One transition from `state`, inverse-CDF over the row in index order,
// consuming exactly one uniform variate.
int step(const TransitionMatrix& p, int state, RngStream& rng);

// The same inverse-CDF with the variate supplied directly.
int step_with_uniform(const TransitionMatrix& p, int state, double u);

}  // namespace arbor

#endif
