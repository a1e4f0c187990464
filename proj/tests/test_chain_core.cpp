#include <doctest.h>

#include <cmath>
#include <map>

#include "arbor/ensemble.hpp"
#include "arbor/errors.hpp"
#include "arbor/stats.hpp"
#include "arbor/transition_matrix.hpp"
#include "test_util.hpp"

using namespace arbor;
using testutil::random_irreducible_matrix;
using testutil::random_positive_matrix;

namespace {
TransitionMatrix mk(int n, std::vector<double> e) { return TransitionMatrix(n, std::move(e)); }
}

TEST_CASE("validate classifies the canonical small chains") {
  auto r = validate(mk(2, {0.5, 0.5, 0.5, 0.5}));
  CHECK(r.row_stochastic);
  CHECK(r.irreducible);
  CHECK(r.aperiodic);
  CHECK(r.assumption_a);
  CHECK(r.period == 1);

  r = validate(mk(2, {0.0, 1.0, 1.0, 0.0}));
  CHECK(r.row_stochastic);
  CHECK(r.irreducible);
  CHECK_FALSE(r.aperiodic);
  CHECK_FALSE(r.assumption_a);
  CHECK(r.period == 2);

  r = validate(mk(2, {1.0, 0.0, 0.0, 1.0}));
  CHECK(r.row_stochastic);
  CHECK_FALSE(r.irreducible);
}

TEST_CASE("validate flags perturbed row sums") {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform() * 5);
    TransitionMatrix p = random_positive_matrix(n, rng);
    std::vector<double> e = p.entries();
    int row = static_cast<int>(rng.uniform() * n);
    double bump = 1e-6 * (1.0 + rng.uniform());
    e[row * n] = std::min(1.0, e[row * n] + bump);
    auto r = validate(TransitionMatrix(n, e), 1e-9);
    CHECK_FALSE(r.row_stochastic);
    CHECK(validate(TransitionMatrix(n, e), 1e-3).row_stochastic);
  }
}

TEST_CASE("non-square input is rejected") {
  CHECK_THROWS_AS(TransitionMatrix(2, {1.0, 0.0, 1.0}), StructureError);
  CHECK_THROWS_AS(TransitionMatrix(0, {}), StructureError);
  CHECK_THROWS_AS(TransitionMatrix(1, {1.5}), StructureError);
}

TEST_CASE("stationary_solve on closed forms") {
  auto pi = stationary_solve(mk(2, {0.5, 0.5, 0.5, 0.5}));
  CHECK(pi.probs[0] == doctest::Approx(0.5).epsilon(1e-12));

  // pi = (b, a) / (a + b) for the generic two-state chain.
  double a = 0.3, b = 0.6;
  pi = stationary_solve(mk(2, {1 - a, a, b, 1 - b}));
  CHECK(pi.probs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pi.probs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary_solve residual on random irreducible chains") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform() * 7);
    TransitionMatrix p = random_irreducible_matrix(n, rng);
    Distribution pi = stationary_solve(p);
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
      double row = 0.0;
      for (int j = 1; j <= n; ++j) row += pi.probs[j - 1] * p(j, i);
      CHECK(std::abs(row - pi.probs[i - 1]) < 1e-10);
      sum += pi.probs[i - 1];
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("stationary_solve rejects reducible chains") {
  CHECK_THROWS_AS(stationary_solve(mk(2, {1.0, 0.0, 0.0, 1.0})), std::domain_error);
}

TEST_CASE("averaged_matrix small cases") {
  TransitionMatrix avg = averaged_matrix(mk(2, {0.0, 1.0, 1.0, 0.0}));
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) CHECK(avg(i, j) == doctest::Approx(0.5));

  TransitionMatrix one = averaged_matrix(mk(1, {1.0}));
  CHECK(one(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("averaged_matrix is positive and row-stochastic for irreducible chains") {
  RngStream rng(13, 0);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform() * 7);
    TransitionMatrix p = random_irreducible_matrix(n, rng);
    TransitionMatrix avg = averaged_matrix(p);
    for (int i = 1; i <= n; ++i) {
      double sum = 0.0;
      for (int j = 1; j <= n; ++j) {
        CHECK(avg(i, j) > 0.0);
        sum += avg(i, j);
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("step follows the inverse CDF in index order") {
  TransitionMatrix det = mk(2, {0.0, 1.0, 1.0, 0.0});
  RngStream rng(1, 0);
  CHECK(step(det, 1, rng) == 2);

  TransitionMatrix uni = mk(2, {0.5, 0.5, 0.5, 0.5});
  CHECK(step_with_uniform(uni, 1, 0.2) == 1);
  CHECK(step_with_uniform(uni, 1, 0.7) == 2);
  CHECK(step_with_uniform(uni, 1, 0.5) == 2);  // boundary goes right
}

TEST_CASE("ensemble source basics") {
  TransitionMatrix det = mk(2, {0.0, 1.0, 1.0, 0.0});
  auto src = make_ensemble_source(det, {1, 2}, RngStream(0, 0));
  CHECK(src->next() == std::vector<int>{1, 2});
  CHECK(src->next() == std::vector<int>{2, 1});
  CHECK(src->next() == std::vector<int>{1, 2});

  RngStream rng(5, 0);
  TransitionMatrix p = random_positive_matrix(4, rng);
  auto s1 = make_ensemble_source(p, {1, 1, 1, 1}, RngStream(42, 9));
  auto s2 = make_ensemble_source(p, {1, 1, 1, 1}, RngStream(42, 9));
  for (int t = 0; t < 100; ++t) CHECK(s1->next() == s2->next());
}

TEST_CASE("ensemble source rejects bad initial vectors") {
  TransitionMatrix p = mk(2, {0.5, 0.5, 0.5, 0.5});
  CHECK_THROWS_AS(SimulatedEnsembleSource(p, {1}, RngStream(0)), StructureError);
  CHECK_THROWS_AS(SimulatedEnsembleSource(p, {1, 3}, RngStream(0)), StructureError);
}

TEST_CASE("lift_two_state preserves state-1 positions and rejects bad input") {
  RngStream rng(3, 0);
  auto lifted = lift_two_state({1, 1, 1}, 5, rng);
  CHECK(lifted == std::vector<int>{1, 1, 1});

  std::vector<int> traj = {1, 2, 2, 1, 2, 1, 1, 2};
  auto y = lift_two_state(traj, 4, rng);
  for (std::size_t t = 0; t < traj.size(); ++t)
    CHECK((y[t] == 1) == (traj[t] == 1));

  CHECK_THROWS_AS(lift_two_state({1, 3}, 4, rng), std::domain_error);
  CHECK_THROWS_AS(lift_two_state({1, 2}, 2, rng), std::domain_error);
}

TEST_CASE("lift_two_state draws uniformly on the lifted states") {
  RngStream rng(17, 0);
  long n2 = 0, n3 = 0;
  const long reps = 100000;
  for (long r = 0; r < reps; ++r) {
    auto y = lift_two_state({1, 2, 2, 1}, 3, rng);
    n2 += (y[1] == 2) + (y[2] == 2);
    n3 += (y[1] == 3) + (y[2] == 3);
  }
  double total = 2.0 * reps;
  double sigma = std::sqrt(0.25 / total);
  CHECK(std::abs(n2 / total - 0.5) < 3 * sigma);
  CHECK(n2 + n3 == 2 * reps);
}

TEST_CASE("lifted occupation frequencies match the predicted stationary law") {
  // Two-state chain with pi = (2/3, 1/3), lifted to 4 states.
  TransitionMatrix p = mk(2, {0.7, 0.3, 0.6, 0.4});
  RngStream chain_rng(29, 0), lift_rng(29, 1);
  const long steps = 200000;
  std::vector<int> traj(steps);
  int state = 1;
  for (long t = 0; t < steps; ++t) {
    traj[t] = state;
    state = step(p, state, chain_rng);
  }
  auto y = lift_two_state(traj, 4, lift_rng);

  FrequencyTable obs;
  std::map<std::string, double> expected{
      {"1", 2.0 / 3.0}, {"2", 1.0 / 9.0}, {"3", 1.0 / 9.0}, {"4", 1.0 / 9.0}};
  for (int v : y) ++obs.counts[std::to_string(v)];
  obs.total = steps;
  TestReport r = chi_square_gof(obs, expected);
  CHECK(r.p_value >= 0.001);
}
