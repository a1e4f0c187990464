#include "arbor/transition_matrix.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "arbor/errors.hpp"

namespace arbor {

TransitionMatrix::TransitionMatrix(int n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 1) throw StructureError("transition matrix needs n >= 1");
  if (entries_.size() != static_cast<std::size_t>(n) * n)
    throw StructureError("transition matrix entries are not n x n");
  for (double e : entries_)
    if (!(e >= 0.0 && e <= 1.0))
      throw StructureError("transition probability outside [0,1]");
}

namespace {

// Strong connectivity of the positive-entry digraph (Kosaraju on a
// matrix this small is overkill; two BFS passes suffice).
bool strongly_connected(const TransitionMatrix& p) {
  const int n = p.size();
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(1);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 1; v <= n; ++v) {
        double w = transpose ? p(v, u) : p(u, v);
        if (w > 0.0 && !seen[v - 1]) {
          seen[v - 1] = 1;
          ++count;
          q.push(v);
        }
      }
    }
    return count == n;
  };
  return reach(false) && reach(true);
}

// Period of the communicating class of state 1: gcd over edges within
// the class of level(u) + 1 - level(v), levels from a BFS rooted at 1.
int class_period(const TransitionMatrix& p) {
  const int n = p.size();
  std::vector<int> level(n, -1);
  std::queue<int> q;
  level[0] = 0;
  q.push(1);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v = 1; v <= n; ++v)
      if (p(u, v) > 0.0 && level[v - 1] < 0) {
        level[v - 1] = level[u - 1] + 1;
        q.push(v);
      }
  }
  int g = 0;
  for (int u = 1; u <= n; ++u) {
    if (level[u - 1] < 0) continue;
    for (int v = 1; v <= n; ++v)
      if (p(u, v) > 0.0 && level[v - 1] >= 0)
        g = std::gcd(g, std::abs(level[u - 1] + 1 - level[v - 1]));
  }
  return g == 0 ? 1 : g;
}

}  // namespace

ValidationReport validate(const TransitionMatrix& p, double tol) {
  const int n = p.size();
  ValidationReport r;
  r.row_stochastic = true;
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += p(i, j);
    if (std::abs(s - 1.0) > tol) r.row_stochastic = false;
  }
  r.irreducible = strongly_connected(p);
  r.period = class_period(p);
  r.aperiodic = (r.period == 1);
  r.assumption_a = true;
  for (int j = 1; j <= n; ++j)
    if (!(p(1, j) > 0.0)) r.assumption_a = false;
  return r;
}

Distribution stationary_solve(const TransitionMatrix& p) {
  const int n = p.size();
  if (!strongly_connected(p))
    throw std::domain_error("stationary distribution: chain is reducible");
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = p(j + 1, i + 1) - (i == j ? 1.0 : 0.0);
  for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = a.partialPivLu().solve(b);
  Distribution d;
  d.probs.assign(pi.data(), pi.data() + n);
  return d;
}

TransitionMatrix averaged_matrix(const TransitionMatrix& p) {
  const int n = p.size();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = p(i + 1, j + 1);
  Eigen::MatrixXd power = m;
  Eigen::MatrixXd acc = m;
  for (int k = 2; k <= n; ++k) {
    power = power * m;
    acc += power;
  }
  acc /= n;
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = acc(i, j);
      out[i * n + j] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }
  return TransitionMatrix(n, std::move(out));
}

int step(const TransitionMatrix& p, int state, RngStream& rng) {
  return step_with_uniform(p, state, rng.uniform());
}

int step_with_uniform(const TransitionMatrix& p, int state, double u) {
  const int n = p.size();
  double cum = 0.0;
  for (int j = 1; j < n; ++j) {
    cum += p(state, j);
    if (u < cum) return j;
  }
  return n;
}

}  // namespace arbor
