#ifndef ARBOR_ARBORESCENCE_HPP
#define ARBOR_ARBORESCENCE_HPP

#include <string>
#include <vector>

#include "arbor/transition_matrix.hpp"

namespace arbor {

// Directed spanning tree with every edge oriented toward the root.
// parent[i-1] is the head of state i's single out-edge; 0 at the root.
struct Arborescence {
  int n = 0;
  int root = 0;
  std::vector<int> parent;

  bool operator==(const Arborescence&) const = default;
};

// Structural validity: exactly one root slot, every non-root state
// reaches the root by following parent links.
bool is_valid(const Arborescence& t);

// "root:p1,p2,...,pn", injective over arborescences of fixed n.
std::string canonical_encode(const Arborescence& t);
Arborescence canonical_decode(const std::string& s);

// Product of p_ij over the tree's edges; 0 if any edge has no mass.
double tree_weight(const TransitionMatrix& p, const Arborescence& t);

inline constexpr int kEnumerationCap = 7;

// Every arborescence on [n] with strictly positive weight, each exactly
// once, sorted by root then lexicographically by parent array.
std::vector<Arborescence> enumerate_arborescences(const TransitionMatrix& p,
                                                  int cap = kEnumerationCap);

// w_root as the determinant of the out-degree Laplacian with the root's
// row and column deleted (weighted matrix-tree theorem). No size cap.
double matrix_tree_root_weight(const TransitionMatrix& p, int root);

struct TreeDistribution {
  struct Entry {
    Arborescence tree;
    double weight = 0.0;
    double probability = 0.0;
  };
  std::vector<Entry> trees;
  double total_weight = 0.0;
  std::vector<double> root_mass;  // root_mass[i-1] = w_i / w
};

TreeDistribution tree_distribution(const TransitionMatrix& p,
                                   int cap = kEnumerationCap);

// Stationary distribution via pi_i = w_i / w; determinant path only,
// so it works above the enumeration cap. Agrees with stationary_solve.
Distribution tree_theorem_stationary(const TransitionMatrix& p);

}  // namespace arbor

#endif
