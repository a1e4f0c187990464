#include "arbor/verify.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "arbor/errors.hpp"

namespace arbor {

std::vector<SuiteOutcome> exactness_suites(const TransitionMatrix& p,
                                           const std::vector<ReplicationOutcome>& outcomes,
                                           double alpha) {
  std::vector<SuiteOutcome> out;
  TreeDistribution dist = tree_distribution(p);

  {
    std::map<std::string, double> expected;
    for (const auto& e : dist.trees) expected[canonical_encode(e.tree)] = e.probability;
    FrequencyTable obs = tally(outcomes, TallyKey::Tree);
    merge_small_cells(obs, expected);
    TestReport r = chi_square_gof(obs, expected);
    out.push_back({"tree-gof", r.p_value >= alpha, r.p_value,
                   "chi2=" + std::to_string(r.statistic) + " dof=" + std::to_string(r.dof)});
  }
  {
    Distribution pi = stationary_solve(p);
    std::map<std::string, double> expected;
    for (int i = 1; i <= p.size(); ++i) expected[std::to_string(i)] = pi.probs[i - 1];
    FrequencyTable obs = tally(outcomes, TallyKey::Root);
    merge_small_cells(obs, expected);
    TestReport r = chi_square_gof(obs, expected);
    out.push_back({"root-gof", r.p_value >= alpha, r.p_value,
                   "chi2=" + std::to_string(r.statistic) + " dof=" + std::to_string(r.dof)});
  }
  return out;
}

SuiteOutcome interruptibility_suite(const std::vector<ReplicationOutcome>& outcomes,
                                    double alpha) {
  std::vector<long> taus;
  for (const auto& r : outcomes)
    if (!r.censored) taus.push_back(r.tau);
  if (taus.size() < 100)
    throw std::domain_error("interruptibility: too few uncensored replications");
  std::sort(taus.begin(), taus.end());

  // Quartile boundaries, deduplicated when tau ties collapse a bucket.
  std::vector<long> bounds;
  for (int q = 1; q <= 3; ++q) {
    long b = taus[taus.size() * q / 4];
    if (bounds.empty() || b > bounds.back()) bounds.push_back(b);
  }
  auto bucket_of = [&](long tau) {
    int b = 0;
    while (b < static_cast<int>(bounds.size()) && tau > bounds[b]) ++b;
    return b;
  };
  const int buckets = static_cast<int>(bounds.size()) + 1;

  std::map<int, int> root_col;
  for (const auto& r : outcomes)
    if (!r.censored && !root_col.count(r.root)) {
      int id = static_cast<int>(root_col.size());
      root_col[r.root] = id;
    }
  std::vector<std::vector<long>> table(buckets,
                                       std::vector<long>(root_col.size(), 0));
  for (const auto& r : outcomes)
    if (!r.censored) ++table[bucket_of(r.tau)][root_col[r.root]];

  // Merge the two rarest root columns while any expected cell is small.
  auto min_expected = [&]() {
    std::vector<double> rs(table.size(), 0), cs(table[0].size(), 0);
    double tot = 0;
    for (std::size_t i = 0; i < table.size(); ++i)
      for (std::size_t j = 0; j < table[i].size(); ++j) {
        rs[i] += table[i][j];
        cs[j] += table[i][j];
        tot += table[i][j];
      }
    double m = 1e300;
    for (double r : rs)
      for (double c : cs) m = std::min(m, r * c / tot);
    return m;
  };
  while (table[0].size() > 2 && min_expected() < 5.0) {
    std::vector<double> cs(table[0].size(), 0);
    for (auto& row : table)
      for (std::size_t j = 0; j < row.size(); ++j) cs[j] += row[j];
    std::size_t a = 0, b = 1;
    if (cs[b] < cs[a]) std::swap(a, b);
    for (std::size_t j = 2; j < cs.size(); ++j) {
      if (cs[j] < cs[a]) {
        b = a;
        a = j;
      } else if (cs[j] < cs[b]) {
        b = j;
      }
    }
    for (auto& row : table) {
      row[std::min(a, b)] += row[std::max(a, b)];
      row.erase(row.begin() + std::max(a, b));
    }
  }

  TestReport r = chi_square_independence(table);
  return {"interruptibility", r.p_value >= alpha, r.p_value,
          "chi2=" + std::to_string(r.statistic) + " dof=" + std::to_string(r.dof)};
}

double formula_block_success_probability(const TransitionMatrix& p) {
  const int n = p.size();
  double w = 0.0;
  for (int r = 1; r <= n; ++r) w += matrix_tree_root_weight(p, r);
  double q = p(1, 1) * w;
  for (int l = 1; l <= n; ++l) q *= p(1, l);
  for (int k = 2; k < n; ++k) q *= k;  // (n-1)!
  return q;
}

double exact_block_success_probability(const TransitionMatrix& p) {
  const int n = p.size();
  // All joint two-step evolutions from (1,...,1): each copy picks a
  // midpoint y and endpoint z; odometer over the 2n choices.
  std::vector<int> y(n, 1), z(n, 1);
  std::vector<int> ones(n, 1);
  double total = 0.0;
  while (true) {
    double prob = 1.0;
    for (int l = 0; l < n; ++l) prob *= p(1, y[l]) * p(y[l], z[l]);
    if (prob > 0.0 && detect_restricted(ones, y, z)) total += prob;

    int d = 2 * n - 1;
    while (d >= 0) {
      int& v = d < n ? y[d] : z[d - n];
      if (v == n) {
        v = 1;
        --d;
      } else {
        ++v;
        break;
      }
    }
    if (d < 0) break;
  }
  return total;
}

SuiteOutcome block_success_suite(const TransitionMatrix& p, long target_blocks,
                                 std::uint64_t seed) {
  const int n = p.size();
  double q = formula_block_success_probability(p);
  SimulatedEnsembleSource src(p, std::vector<int>(n, 1), RngStream(seed, 0));

  std::vector<int> w2 = src.next();
  std::vector<int> w1 = src.next();
  long conditioning = 0, successes = 0;
  while (conditioning < target_blocks) {
    const std::vector<int>& w0 = src.next();
    bool a = std::all_of(w2.begin(), w2.end(), [](int x) { return x == 1; });
    if (a) {
      ++conditioning;
      if (detect_restricted(w2, w1, w0)) ++successes;
    }
    w2 = w0;
    w1 = src.next();
  }
  double rate = static_cast<double>(successes) / conditioning;
  double sigma = std::sqrt(q * (1.0 - q) / conditioning);
  bool pass = std::abs(rate - q) <= 3.0 * sigma;
  return {"block-success-probability", pass, -1.0,
          "rate=" + std::to_string(rate) + " expected=" + std::to_string(q) +
              " 3sigma=" + std::to_string(3.0 * sigma)};
}

VerifyReport run_verification(const TransitionMatrix& p, const VerifyOptions& opt) {
  VerifyReport report;

  {
    Distribution a = tree_theorem_stationary(p);
    Distribution b = stationary_solve(p);
    double diff = 0.0;
    for (int i = 0; i < p.size(); ++i)
      diff = std::max(diff, std::abs(a.probs[i] - b.probs[i]));
    report.suites.push_back({"stationary-dual-oracle", diff < 1e-10, -1.0,
                             "inf-norm discrepancy=" + std::to_string(diff)});
  }

  ReplicateConfig cfg;
  cfg.mode = opt.mode;
  cfg.init = opt.init;
  cfg.max_blocks = opt.max_blocks;
  cfg.threads = opt.threads;
  auto outcomes = replicate(cfg, p, opt.replications, opt.seed);
  for (const auto& r : outcomes)
    if (r.censored) ++report.censored;

  for (auto& s : exactness_suites(p, outcomes, opt.alpha))
    report.suites.push_back(std::move(s));
  report.suites.push_back(interruptibility_suite(outcomes, opt.alpha));
  if (opt.mode == SamplerMode::Restricted)
    report.suites.push_back(
        block_success_suite(p, opt.replications, opt.seed ^ 0x5eedULL));
  return report;
}

}  // namespace arbor
