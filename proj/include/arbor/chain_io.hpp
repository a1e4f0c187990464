#ifndef ARBOR_CHAIN_IO_HPP
#define ARBOR_CHAIN_IO_HPP

#include <string>
#include <vector>

#include "arbor/transition_matrix.hpp"

namespace arbor {

struct ChainSpec {
  TransitionMatrix matrix;
  std::vector<std::string> labels;  // optional, empty if absent
};

// Parses {"n": int, "P": [[row],...], "labels": [...]?}. Throws
// std::runtime_error with the offending row/field named on bad input.
ChainSpec load_chain_spec(const std::string& path);

}  // namespace arbor

#endif
