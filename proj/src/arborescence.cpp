#include "arbor/arborescence.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "arbor/errors.hpp"

namespace arbor {

namespace {
// Weights this small are numerically indistinguishable from zero edges.
constexpr double kWeightFloor = 1e-300;
}  // namespace

bool is_valid(const Arborescence& t) {
  const int n = t.n;
  if (n < 1 || t.root < 1 || t.root > n) return false;
  if (t.parent.size() != static_cast<std::size_t>(n)) return false;
  if (t.parent[t.root - 1] != 0) return false;
  for (int i = 1; i <= n; ++i) {
    if (i == t.root) continue;
    if (t.parent[i - 1] < 1 || t.parent[i - 1] > n) return false;
  }
  // Walk each state toward the root, stamping visited chains.
  std::vector<int> stamp(n, 0);
  for (int i = 1; i <= n; ++i) {
    int v = i;
    int hops = 0;
    while (v != t.root) {
      if (stamp[v - 1] == i) return false;  // cycle
      stamp[v - 1] = i;
      v = t.parent[v - 1];
      if (++hops > n) return false;
    }
  }
  return true;
}

std::string canonical_encode(const Arborescence& t) {
  std::string s = std::to_string(t.root) + ":";
  for (int i = 0; i < t.n; ++i) {
    if (i) s += ',';
    s += std::to_string(t.parent[i]);
  }
  return s;
}

Arborescence canonical_decode(const std::string& s) {
  Arborescence t;
  std::size_t colon = s.find(':');
  if (colon == std::string::npos) throw StructureError("bad arborescence encoding");
  t.root = std::atoi(s.substr(0, colon).c_str());
  std::size_t pos = colon + 1;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos);
    t.parent.push_back(std::atoi(tok.c_str()));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  t.n = static_cast<int>(t.parent.size());
  if (!is_valid(t)) throw StructureError("decoded string is not an arborescence");
  return t;
}

double tree_weight(const TransitionMatrix& p, const Arborescence& t) {
  if (!is_valid(t)) throw StructureError("tree_weight: malformed arborescence");
  double w = 1.0;
  for (int i = 1; i <= t.n; ++i) {
    if (i == t.root) continue;
    w *= p(i, t.parent[i - 1]);
    if (w < kWeightFloor) return 0.0;
  }
  return w;
}

std::vector<Arborescence> enumerate_arborescences(const TransitionMatrix& p, int cap) {
  const int n = p.size();
  if (n > cap)
    throw CapacityError("enumeration limited to n <= " + std::to_string(cap), cap);

  std::vector<Arborescence> out;
  std::vector<int> stamp(n, 0);
  for (int root = 1; root <= n; ++root) {
    Arborescence t;
    t.n = n;
    t.root = root;
    t.parent.assign(n, 0);
    // Odometer over parent choices for the non-root states, most
    // significant digit at the lowest index, giving lexicographic order.
    std::vector<int> slots;
    for (int i = 1; i <= n; ++i)
      if (i != root) slots.push_back(i);
    const int k = static_cast<int>(slots.size());
    std::vector<int> digit(k, 1);
    while (true) {
      for (int d = 0; d < k; ++d) t.parent[slots[d] - 1] = digit[d];

      double w = 1.0;
      for (int d = 0; d < k && w > 0.0; ++d) {
        w *= p(slots[d], digit[d]);
        if (w < kWeightFloor) w = 0.0;
      }
      if (w > 0.0) {
        // Acyclicity toward the root.
        bool ok = true;
        std::fill(stamp.begin(), stamp.end(), 0);
        for (int i = 1; i <= n && ok; ++i) {
          int v = i;
          while (v != root) {
            if (stamp[v - 1] == i) {
              ok = false;
              break;
            }
            stamp[v - 1] = i;
            v = t.parent[v - 1];
          }
        }
        if (ok) out.push_back(t);
      }

      int d = k - 1;
      while (d >= 0 && digit[d] == n) digit[d--] = 1;
      if (d < 0) break;
      ++digit[d];
    }
  }
  return out;
}

double matrix_tree_root_weight(const TransitionMatrix& p, int root) {
  const int n = p.size();
  if (root < 1 || root > n) throw StructureError("root outside [n]");
  if (n == 1) return 1.0;  // empty product over an empty minor
  Eigen::MatrixXd minor(n - 1, n - 1);
  int r = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == root) continue;
    int c = 0;
    for (int j = 1; j <= n; ++j) {
      if (j == root) continue;
      if (i == j) {
        double deg = 0.0;
        for (int k = 1; k <= n; ++k)
          if (k != i) deg += p(i, k);
        minor(r, c) = deg;
      } else {
        minor(r, c) = -p(i, j);
      }
      ++c;
    }
    ++r;
  }
  return minor.partialPivLu().determinant();
}

TreeDistribution tree_distribution(const TransitionMatrix& p, int cap) {
  const int n = p.size();
  if (!validate(p).irreducible)
    throw std::domain_error("tree distribution requires an irreducible chain");

  TreeDistribution d;
  d.trees.reserve(64);
  d.root_mass.assign(n, 0.0);
  for (const Arborescence& t : enumerate_arborescences(p, cap)) {
    double w = tree_weight(p, t);
    if (w <= 0.0) continue;
    d.trees.push_back({t, w, 0.0});
    d.total_weight += w;
    d.root_mass[t.root - 1] += w;
  }
  for (auto& e : d.trees) e.probability = e.weight / d.total_weight;
  for (double& m : d.root_mass) m /= d.total_weight;

  // Cross-check the enumerated total against the determinant route.
  double det_total = 0.0;
  for (int r = 1; r <= n; ++r) det_total += matrix_tree_root_weight(p, r);
  if (std::abs(det_total - d.total_weight) > 1e-10 * std::max(1.0, d.total_weight))
    throw std::runtime_error("tree distribution: enumeration and determinant totals disagree");
  return d;
}

Distribution tree_theorem_stationary(const TransitionMatrix& p) {
  const int n = p.size();
  if (!validate(p).irreducible)
    throw std::domain_error("tree theorem requires an irreducible chain");
  Distribution d;
  d.probs.resize(n);
  double total = 0.0;
  for (int r = 1; r <= n; ++r) {
    d.probs[r - 1] = matrix_tree_root_weight(p, r);
    total += d.probs[r - 1];
  }
  for (double& v : d.probs) v /= total;
  return d;
}

}  // namespace arbor
