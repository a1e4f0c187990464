#ifndef ARBOR_ERRORS_HPP
#define ARBOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace arbor {

// Raised when a structural precondition fails (malformed arborescence,
// wrong window length, non-square matrix, ...).
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an input exceeds the exhaustive-enumeration cap.
class CapacityError : public std::length_error {
 public:
  CapacityError(const std::string& msg, int cap)
      : std::length_error(msg), cap_(cap) {}
  int cap() const { return cap_; }

 private:
  int cap_;
};

// Raised when a sampler run exhausts its block budget. Not a sample:
// the run is censored and may be recorded as such without bias.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(long blocks_examined)
      : std::runtime_error("block budget exhausted after " +
                           std::to_string(blocks_examined) + " blocks"),
        blocks_examined_(blocks_examined) {}
  long blocks_examined() const { return blocks_examined_; }

 private:
  long blocks_examined_;
};

// Raised by the chi-square tests when some expected cell count is below
// the minimum; the caller must merge cells first.
class CellMergeRequiredError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace arbor

#endif
