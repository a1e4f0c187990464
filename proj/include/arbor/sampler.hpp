#ifndef ARBOR_SAMPLER_HPP
#define ARBOR_SAMPLER_HPP

#include <optional>
#include <span>
#include <vector>

#include "arbor/arborescence.hpp"
#include "arbor/ensemble.hpp"
#include "arbor/rng.hpp"

namespace arbor {

// Which of the per-block events held. A block succeeds iff all four.
struct EventTrace {
  bool a = false;
  bool b = false;
  bool c = false;
  bool d = false;
  bool success() const { return a && b && c && d; }
};

// U_0, ..., U_n, each uniform on [n], drawn fresh every general-mode block.
struct OffsetVector {
  std::vector<int> u;
};

struct SampleResult {
  Arborescence tree;
  int root = 0;
  long tau = 0;
  long blocks_examined = 0;
  std::optional<OffsetVector> offsets;  // absent in restricted mode
};

// Restricted-mode block check on the vectors at t-2, t-1, t.
// Succeeds when all copies sat at 1 at t-2, copy 1 stayed at 1 at t-1,
// {X_1(t), X_2(t-1), ..., X_n(t-1)} is a permutation of [n], and the
// edges X_l(t-1) -> X_l(t), l >= 2, form an arborescence. Its root is
// then X_1(t).
std::optional<Arborescence> detect_restricted(std::span<const int> w2,
                                              std::span<const int> w1,
                                              std::span<const int> w0,
                                              EventTrace* trace = nullptr);

// General-mode block check on a window of 2n+1 vectors spanning times
// t-2n..t, with per-copy uniform time offsets.
std::optional<Arborescence> detect_general(std::span<const std::vector<int>> window,
                                           const OffsetVector& u,
                                           EventTrace* trace = nullptr);

// Scan even times t = 2, 4, ... until a block succeeds. Throws
// BudgetExceededError after max_blocks failures (a censored run, not a
// sample). Only next() is ever called on the source.
SampleResult run_restricted(EnsembleSource& src,
                            std::optional<long> max_blocks = std::nullopt);

// Scan blocks ending at t = 2n, 4n, ...; a fresh offset vector is drawn
// from rng every block, before the events are checked.
SampleResult run_general(EnsembleSource& src, RngStream& rng,
                         std::optional<long> max_blocks = std::nullopt);

enum class SamplerMode { Restricted, General };
enum class InitPolicy { AllOnes, Fixed, Random };

struct ReplicateConfig {
  SamplerMode mode = SamplerMode::Restricted;
  InitPolicy init = InitPolicy::AllOnes;
  std::vector<int> fixed_init;  // used when init == Fixed
  std::optional<long> max_blocks;
  int threads = 1;
};

// One replication's outcome, flattened for bulk tallies. Censored
// entries carry only blocks_examined.
struct ReplicationOutcome {
  bool censored = false;
  long tau = 0;
  int root = 0;
  std::string tree_key;
  long blocks = 0;
  std::optional<std::vector<int>> offsets;
};

// `count` independent replications, each with its own source and rng
// streams derived from (seed, index). Deterministic for a fixed seed,
// independent of the thread count.
std::vector<ReplicationOutcome> replicate(const ReplicateConfig& cfg,
                                          const TransitionMatrix& p, long count,
                                          std::uint64_t seed);

}  // namespace arbor

#endif
