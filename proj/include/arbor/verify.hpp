#ifndef ARBOR_VERIFY_HPP
#define ARBOR_VERIFY_HPP

#include <string>
#include <vector>

#include "arbor/sampler.hpp"
#include "arbor/stats.hpp"

namespace arbor {

struct VerifyOptions {
  SamplerMode mode = SamplerMode::Restricted;
  long replications = 100000;
  std::uint64_t seed = 1;
  double alpha = 0.001;
  long max_blocks = 1000000;
  InitPolicy init = InitPolicy::AllOnes;
  int threads = 1;
};

struct SuiteOutcome {
  std::string name;
  bool pass = false;
  double p_value = -1.0;  // -1 when the check is not p-value based
  std::string note;
};

struct VerifyReport {
  std::vector<SuiteOutcome> suites;
  long censored = 0;
  bool all_pass() const {
    for (const auto& s : suites)
      if (!s.pass) return false;
    return true;
  }
};

// Chi-square GOF of sampled trees and roots against the exact tree
// distribution and stationary distribution. Factored out so a biased
// fixture can be run through the identical checks.
std::vector<SuiteOutcome> exactness_suites(const TransitionMatrix& p,
                                           const std::vector<ReplicationOutcome>& outcomes,
                                           double alpha);

// Independence of tau-quartile and output root.
SuiteOutcome interruptibility_suite(const std::vector<ReplicationOutcome>& outcomes,
                                    double alpha);

// Restricted mode: empirical per-block success rate conditioned on all
// copies sitting at 1 at the block start, against the exact
// (n-1)! p_11 (prod_l p_1l) w, within 3 sigma.
SuiteOutcome block_success_suite(const TransitionMatrix& p, long target_blocks,
                                 std::uint64_t seed);

// Exact per-block success probability by exhaustive enumeration of all
// two-step joint evolutions from the all-ones vector.
double exact_block_success_probability(const TransitionMatrix& p);

// Theorem-side closed form for the same quantity.
double formula_block_success_probability(const TransitionMatrix& p);

// The full suite behind `arbor verify`.
VerifyReport run_verification(const TransitionMatrix& p, const VerifyOptions& opt);

}  // namespace arbor

#endif
