// arbor: validation, exact tree analytics, passive sampling experiments
// and statistical verification for finite Markov chains.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "arbor/arborescence.hpp"
#include "arbor/chain_io.hpp"
#include "arbor/ensemble.hpp"
#include "arbor/errors.hpp"
#include "arbor/sampler.hpp"
#include "arbor/stats.hpp"
#include "arbor/verify.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;  // domain or statistical failure
constexpr int kExitInfra = 2;   // parse or infrastructure failure

int thread_count() {
  if (const char* env = std::getenv("ARBOR_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int cmd_validate(const std::string& path) {
  arbor::ChainSpec spec = arbor::load_chain_spec(path);
  arbor::ValidationReport r = arbor::validate(spec.matrix);
  ordered_json j;
  j["row_stochastic"] = r.row_stochastic;
  j["irreducible"] = r.irreducible;
  j["aperiodic"] = r.aperiodic;
  j["assumption_a"] = r.assumption_a;
  j["period"] = r.period;
  ordered_json warnings = ordered_json::array();
  if (!r.aperiodic) warnings.push_back("chain is periodic");
  if (!r.assumption_a) warnings.push_back("Assumption A does not hold (some p_1j = 0)");
  j["warnings"] = warnings;
  std::cout << j.dump(2) << "\n";
  return (r.row_stochastic && r.irreducible) ? kExitOk : kExitDomain;
}

int cmd_dist(const std::string& path, const std::string& out_path, bool stationary_only) {
  arbor::ChainSpec spec = arbor::load_chain_spec(path);
  const arbor::TransitionMatrix& p = spec.matrix;
  arbor::ValidationReport v = arbor::validate(p);
  if (!v.row_stochastic || !v.irreducible) {
    std::cerr << "dist: chain must be row-stochastic and irreducible\n";
    return kExitDomain;
  }

  ordered_json j;
  arbor::Distribution pi_tree = arbor::tree_theorem_stationary(p);
  arbor::Distribution pi_solve = arbor::stationary_solve(p);
  double disc = 0.0;
  for (int i = 0; i < p.size(); ++i)
    disc = std::max(disc, std::abs(pi_tree.probs[i] - pi_solve.probs[i]));
  j["n"] = p.size();
  j["pi_tree_theorem"] = pi_tree.probs;
  j["pi_linear_solve"] = pi_solve.probs;
  j["discrepancy"] = disc;

  if (!stationary_only) {
    if (p.size() > arbor::kEnumerationCap) {
      std::cerr << "dist: n=" << p.size() << " exceeds the enumeration cap "
                << arbor::kEnumerationCap << "; rerun with --stationary-only\n";
      return kExitDomain;
    }
    arbor::TreeDistribution dist = arbor::tree_distribution(p);
    ordered_json trees = ordered_json::array();
    for (const auto& e : dist.trees) {
      ordered_json t;
      t["tree"] = arbor::canonical_encode(e.tree);
      t["root"] = e.tree.root;
      t["weight"] = e.weight;
      t["prob"] = e.probability;
      trees.push_back(t);
    }
    j["total_weight"] = dist.total_weight;
    j["root_mass"] = dist.root_mass;
    j["trees"] = trees;
  }

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "dist: cannot write " << out_path << "\n";
    return kExitInfra;
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

struct SampleArgs {
  std::string chain_path;
  std::string mode = "restricted";
  long replications = 1;
  std::uint64_t seed = 0;
  long max_blocks = 1000000;
  std::string init = "all-ones";
  std::string init_states;
  std::string out_path;
  bool allow_periodic = false;
};

arbor::ReplicateConfig make_config(const SampleArgs& a, int n) {
  arbor::ReplicateConfig cfg;
  cfg.mode = a.mode == "general" ? arbor::SamplerMode::General
                                 : arbor::SamplerMode::Restricted;
  cfg.max_blocks = a.max_blocks;
  cfg.threads = thread_count();
  if (a.init == "fixed") {
    cfg.init = arbor::InitPolicy::Fixed;
    std::size_t pos = 0;
    while (pos < a.init_states.size()) {
      std::size_t comma = a.init_states.find(',', pos);
      cfg.fixed_init.push_back(std::atoi(a.init_states.substr(pos).c_str()));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cfg.fixed_init.size() != static_cast<std::size_t>(n))
      throw std::domain_error("--init-states must list exactly n states");
  } else if (a.init == "random") {
    cfg.init = arbor::InitPolicy::Random;
  } else {
    cfg.init = arbor::InitPolicy::AllOnes;
  }
  return cfg;
}

int cmd_sample(const SampleArgs& a) {
  arbor::ChainSpec spec = arbor::load_chain_spec(a.chain_path);
  const arbor::TransitionMatrix& p = spec.matrix;
  arbor::ValidationReport v = arbor::validate(p);
  if (!v.row_stochastic || !v.irreducible) {
    std::cerr << "sample: chain must be row-stochastic and irreducible\n";
    return kExitDomain;
  }
  if (a.mode == "restricted" && !v.assumption_a) {
    std::cerr << "sample: Assumption A fails (some p_1j = 0); use --mode general\n";
    return kExitDomain;
  }
  if (a.mode == "general" && !v.aperiodic && !a.allow_periodic) {
    std::cerr << "sample: chain is periodic; the general sampler may never see all "
                 "copies co-occupy state 1 on the block grid. Pass --allow-periodic "
                 "to try anyway.\n";
    return kExitDomain;
  }

  arbor::ReplicateConfig cfg = make_config(a, p.size());
  auto results = arbor::replicate(cfg, p, a.replications, a.seed);

  std::ofstream out(a.out_path);
  if (!out) {
    std::cerr << "sample: cannot write " << a.out_path << "\n";
    return kExitInfra;
  }
  long censored = 0;
  double tau_sum = 0.0;
  std::map<int, long> root_counts;
  for (const auto& r : results) {
    ordered_json j;
    if (r.censored) {
      ++censored;
      j["tau"] = nullptr;
      j["root"] = nullptr;
      j["tree"] = nullptr;
    } else {
      tau_sum += r.tau;
      ++root_counts[r.root];
      j["tau"] = r.tau;
      j["root"] = r.root;
      j["tree"] = r.tree_key;
    }
    j["blocks"] = r.blocks;
    j["censored"] = r.censored;
    if (r.offsets)
      j["offsets"] = *r.offsets;
    else
      j["offsets"] = nullptr;
    out << j.dump() << "\n";
  }

  long ok = a.replications - censored;
  std::cout << "replications: " << a.replications << "\n"
            << "censored: " << censored << "\n"
            << "mean tau: " << (ok ? tau_sum / ok : 0.0) << "\n";
  for (const auto& [root, c] : root_counts)
    std::cout << "root " << root << ": " << static_cast<double>(c) / ok << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& path, const std::string& mode_arg, long replications,
               std::uint64_t seed, double alpha, long max_blocks, bool allow_periodic) {
  arbor::ChainSpec spec = arbor::load_chain_spec(path);
  const arbor::TransitionMatrix& p = spec.matrix;
  arbor::ValidationReport v = arbor::validate(p);
  if (!v.row_stochastic || !v.irreducible) {
    std::cerr << "verify: chain must be row-stochastic and irreducible\n";
    return kExitDomain;
  }
  if (p.size() > arbor::kEnumerationCap) {
    std::cerr << "verify: n exceeds the enumeration cap " << arbor::kEnumerationCap << "\n";
    return kExitDomain;
  }

  arbor::VerifyOptions opt;
  if (mode_arg == "auto")
    opt.mode = v.assumption_a ? arbor::SamplerMode::Restricted
                              : arbor::SamplerMode::General;
  else
    opt.mode = mode_arg == "general" ? arbor::SamplerMode::General
                                     : arbor::SamplerMode::Restricted;
  if (opt.mode == arbor::SamplerMode::Restricted && !v.assumption_a) {
    std::cerr << "verify: Assumption A fails; use --mode general\n";
    return kExitDomain;
  }
  if (opt.mode == arbor::SamplerMode::General && !v.aperiodic && !allow_periodic) {
    std::cerr << "verify: chain is periodic; pass --allow-periodic to try anyway\n";
    return kExitDomain;
  }
  opt.replications = replications;
  opt.seed = seed;
  opt.alpha = alpha;
  opt.max_blocks = max_blocks;
  opt.threads = thread_count();

  arbor::VerifyReport report = arbor::run_verification(p, opt);
  std::cout << "censored: " << report.censored << "\n";
  for (const auto& s : report.suites) {
    std::cout << (s.pass ? "PASS" : "FAIL") << "  " << s.name;
    if (s.p_value >= 0.0) std::cout << "  p=" << s.p_value;
    if (!s.note.empty()) std::cout << "  (" << s.note << ")";
    std::cout << "\n";
  }
  return report.all_pass() ? kExitOk : kExitDomain;
}

int cmd_lift_demo(const std::string& path, int n, long steps, std::uint64_t seed,
                  double alpha) {
  arbor::ChainSpec spec = arbor::load_chain_spec(path);
  const arbor::TransitionMatrix& p = spec.matrix;
  if (p.size() != 2) {
    std::cerr << "lift-demo: chain must have exactly 2 states\n";
    return kExitDomain;
  }
  arbor::ValidationReport v = arbor::validate(p);
  if (!v.row_stochastic || !v.irreducible || !v.aperiodic) {
    std::cerr << "lift-demo: chain must be row-stochastic, irreducible and aperiodic\n";
    return kExitDomain;
  }
  if (n < 3) {
    std::cerr << "lift-demo: --n must be >= 3\n";
    return kExitDomain;
  }

  arbor::RngStream chain_rng(seed, 0);
  arbor::RngStream lift_rng(seed, 1);
  std::vector<int> traj(steps);
  int state = 1;
  for (long t = 0; t < steps; ++t) {
    traj[t] = state;
    state = arbor::step(p, state, chain_rng);
  }
  std::vector<int> lifted = arbor::lift_two_state(traj, n, lift_rng);

  arbor::Distribution pi = arbor::stationary_solve(p);
  std::vector<double> predicted(n);
  predicted[0] = pi.probs[0];
  for (int i = 1; i < n; ++i) predicted[i] = pi.probs[1] / (n - 1);

  arbor::FrequencyTable obs;
  std::map<std::string, double> expected;
  std::vector<long> counts(n, 0);
  for (int y : lifted) ++counts[y - 1];
  for (int i = 0; i < n; ++i) {
    obs.counts[std::to_string(i + 1)] = counts[i];
    expected[std::to_string(i + 1)] = predicted[i];
  }
  obs.total = steps;
  arbor::TestReport r = arbor::chi_square_gof(obs, expected);

  ordered_json j;
  j["n"] = n;
  j["steps"] = steps;
  ordered_json freq = ordered_json::array();
  for (long c : counts) freq.push_back(static_cast<double>(c) / steps);
  j["empirical"] = freq;
  j["predicted"] = predicted;
  j["gof"] = {{"stat", r.statistic}, {"dof", r.dof}, {"p", r.p_value}};
  std::cout << j.dump(2) << "\n";
  return r.p_value >= alpha ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passive interruptible exact sampling for finite Markov chains"};
  app.require_subcommand(1);

  std::string chain_path, out_path;
  bool stationary_only = false;

  auto* validate_cmd = app.add_subcommand("validate", "Validate a chain spec");
  validate_cmd->add_option("spec", chain_path)->required();

  auto* dist_cmd = app.add_subcommand("dist", "Exact tree distribution and pi");
  dist_cmd->add_option("spec", chain_path)->required();
  dist_cmd->add_option("-o,--output", out_path)->required();
  dist_cmd->add_flag("--stationary-only", stationary_only);

  SampleArgs sargs;
  auto* sample_cmd = app.add_subcommand("sample", "Run sampling replications");
  sample_cmd->add_option("spec", sargs.chain_path)->required();
  sample_cmd->add_option("--mode", sargs.mode)
      ->check(CLI::IsMember({"restricted", "general"}));
  sample_cmd->add_option("-r,--replications", sargs.replications);
  sample_cmd->add_option("--seed", sargs.seed);
  sample_cmd->add_option("--max-blocks", sargs.max_blocks);
  sample_cmd->add_option("--init", sargs.init)
      ->check(CLI::IsMember({"all-ones", "fixed", "random"}));
  sample_cmd->add_option("--init-states", sargs.init_states,
                         "Comma-separated states for --init fixed");
  sample_cmd->add_option("-o,--output", sargs.out_path)->required();
  sample_cmd->add_flag("--allow-periodic", sargs.allow_periodic);

  std::string verify_mode = "auto";
  long verify_reps = 100000;
  std::uint64_t verify_seed = 1;
  double alpha = 0.001;
  long verify_max_blocks = 1000000;
  bool verify_allow_periodic = false;
  auto* verify_cmd = app.add_subcommand("verify", "Statistical acceptance suite");
  verify_cmd->add_option("spec", chain_path)->required();
  verify_cmd->add_option("--mode", verify_mode)
      ->check(CLI::IsMember({"auto", "restricted", "general"}));
  verify_cmd->add_option("-r,--replications", verify_reps);
  verify_cmd->add_option("--seed", verify_seed);
  verify_cmd->add_option("--alpha", alpha)->check(CLI::Range(1e-12, 0.5));
  verify_cmd->add_option("--max-blocks", verify_max_blocks);
  verify_cmd->add_flag("--allow-periodic", verify_allow_periodic);

  int lift_n = 3;
  long lift_steps = 1000000;
  std::uint64_t lift_seed = 0;
  auto* lift_cmd = app.add_subcommand("lift-demo", "Two-state lifting demonstration");
  lift_cmd->add_option("spec", chain_path)->required();
  lift_cmd->add_option("--n", lift_n)->required();
  lift_cmd->add_option("--steps", lift_steps);
  lift_cmd->add_option("--seed", lift_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(chain_path);
    if (dist_cmd->parsed()) return cmd_dist(chain_path, out_path, stationary_only);
    if (sample_cmd->parsed()) return cmd_sample(sargs);
    if (verify_cmd->parsed())
      return cmd_verify(chain_path, verify_mode, verify_reps, verify_seed, alpha,
                        verify_max_blocks, verify_allow_periodic);
    if (lift_cmd->parsed())
      return cmd_lift_demo(chain_path, lift_n, lift_steps, lift_seed, 0.001);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfra;
  }
  return kExitInfra;
}
