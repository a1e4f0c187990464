#ifndef ARBOR_STATS_HPP
#define ARBOR_STATS_HPP

#include <map>
#include <string>
#include <vector>

#include "arbor/sampler.hpp"

namespace arbor {

struct FrequencyTable {
  std::map<std::string, long> counts;
  long total = 0;
};

struct TestReport {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

enum class TallyKey { Root, Tree };

// Counts uncensored outcomes by root or canonical tree key.
FrequencyTable tally(const std::vector<ReplicationOutcome>& results, TallyKey key);

// Lower regularized incomplete gamma P(a, x); series for x < a+1,
// continued fraction otherwise. Absolute accuracy ~1e-14.
double regularized_gamma_p(double a, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_upper_tail(double x, int dof);

// Pearson goodness of fit of observed counts against expected
// probabilities. Every expected category is a cell (zero observed
// counts included); expected cell counts must all be >= 5.
TestReport chi_square_gof(const FrequencyTable& observed,
                          const std::map<std::string, double>& expected);

// Pearson independence test on a 2-D contingency table.
TestReport chi_square_independence(const std::vector<std::vector<long>>& table);

// Merge the rarest expected categories into a single "other" cell until
// every expected count reaches min_expected; observed counts follow.
void merge_small_cells(FrequencyTable& observed,
                       std::map<std::string, double>& expected, double min_expected = 5.0);

}  // namespace arbor

#endif
