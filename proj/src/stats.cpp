#include "arbor/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arbor/errors.hpp"

namespace arbor {

FrequencyTable tally(const std::vector<ReplicationOutcome>& results, TallyKey key) {
  FrequencyTable t;
  for (const auto& r : results) {
    if (r.censored) continue;
    std::string k = key == TallyKey::Root ? std::to_string(r.root) : r.tree_key;
    ++t.counts[k];
    ++t.total;
  }
  if (t.total == 0) throw std::domain_error("tally: no uncensored results");
  return t;
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("regularized_gamma_p: bad args");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double chi_square_upper_tail(double x, int dof) {
  if (dof < 1) throw std::domain_error("chi_square_upper_tail: dof < 1");
  if (x <= 0.0) return 1.0;
  double a = 0.5 * dof, h = 0.5 * x;
  return h < a + 1.0 ? 1.0 - gamma_p_series(a, h) : gamma_q_contfrac(a, h);
}

TestReport chi_square_gof(const FrequencyTable& observed,
                          const std::map<std::string, double>& expected) {
  double psum = 0.0;
  for (const auto& [k, p] : expected) psum += p;
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::domain_error("chi_square_gof: expected probabilities do not sum to 1");
  for (const auto& [k, c] : observed.counts)
    if (!expected.count(k))
      throw std::domain_error("chi_square_gof: observed category '" + k +
                              "' has no expected mass");

  TestReport r;
  for (const auto& [k, p] : expected) {
    double e = observed.total * p;
    if (e < 5.0)
      throw CellMergeRequiredError("chi_square_gof: expected count " +
                                   std::to_string(e) + " in cell '" + k +
                                   "' is below 5; merge cells first");
    auto it = observed.counts.find(k);
    double o = it == observed.counts.end() ? 0.0 : static_cast<double>(it->second);
    r.statistic += (o - e) * (o - e) / e;
  }
  r.dof = static_cast<int>(expected.size()) - 1;
  if (r.dof < 1) throw std::domain_error("chi_square_gof: fewer than two cells");
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

TestReport chi_square_independence(const std::vector<std::vector<long>>& table) {
  const int rows = static_cast<int>(table.size());
  if (rows < 2) throw std::domain_error("chi_square_independence: need >= 2 rows");
  const int cols = static_cast<int>(table[0].size());
  if (cols < 2) throw std::domain_error("chi_square_independence: need >= 2 cols");

  std::vector<double> rsum(rows, 0.0), csum(cols, 0.0);
  double total = 0.0;
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(table[i].size()) != cols)
      throw StructureError("chi_square_independence: ragged table");
    for (int j = 0; j < cols; ++j) {
      rsum[i] += table[i][j];
      csum[j] += table[i][j];
      total += table[i][j];
    }
  }
  for (double s : rsum)
    if (s <= 0.0) throw std::domain_error("chi_square_independence: zero row sum");
  for (double s : csum)
    if (s <= 0.0) throw std::domain_error("chi_square_independence: zero column sum");

  TestReport r;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double e = rsum[i] * csum[j] / total;
      if (e < 5.0)
        throw CellMergeRequiredError("chi_square_independence: expected count below 5");
      double o = static_cast<double>(table[i][j]);
      r.statistic += (o - e) * (o - e) / e;
    }
  r.dof = (rows - 1) * (cols - 1);
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

void merge_small_cells(FrequencyTable& observed,
                       std::map<std::string, double>& expected, double min_expected) {
  // Repeatedly fold the rarest expected category into "other".
  while (expected.size() > 2) {
    auto smallest = std::min_element(
        expected.begin(), expected.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    if (observed.total * smallest->second >= min_expected &&
        (!expected.count("other") ||
         observed.total * expected.at("other") >= min_expected))
      break;
    std::string key = smallest->first;
    if (key == "other") {
      // "other" itself is smallest; fold the next rarest into it.
      double best = 2.0;
      for (const auto& [k, p] : expected)
        if (k != "other" && p < best) {
          best = p;
          key = k;
        }
    }
    expected["other"] += expected[key];
    expected.erase(key);
    auto it = observed.counts.find(key);
    long c = it == observed.counts.end() ? 0 : it->second;
    if (it != observed.counts.end()) observed.counts.erase(it);
    observed.counts["other"] += c;
  }
}

}  // namespace arbor
