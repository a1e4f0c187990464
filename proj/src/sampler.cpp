#include "arbor/sampler.hpp"

#include <algorithm>
#include <thread>

#include "arbor/errors.hpp"

namespace arbor {

namespace {

// Builds the arborescence defined by edges sources[k] -> targets[k],
// provided the sources are distinct and leave exactly one state (the
// root) without an out-edge, and the edges are acyclic toward it.
std::optional<Arborescence> edges_to_arborescence(std::span<const int> sources,
                                                  std::span<const int> targets,
                                                  int n) {
  Arborescence t;
  t.n = n;
  t.parent.assign(n, 0);
  std::vector<char> has_out(n, 0);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    int s = sources[k];
    if (has_out[s - 1]) return std::nullopt;  // duplicate source
    has_out[s - 1] = 1;
    t.parent[s - 1] = targets[k];
  }
  int root = 0;
  for (int i = 1; i <= n; ++i)
    if (!has_out[i - 1]) {
      if (root != 0) return std::nullopt;
      root = i;
    }
  if (root == 0) return std::nullopt;
  t.root = root;
  if (!is_valid(t)) return std::nullopt;
  return t;
}

bool all_ones(std::span<const int> v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 1; });
}

bool is_permutation_of_states(std::span<const int> values, int n) {
  std::vector<char> seen(n, 0);
  for (int v : values) {
    if (v < 1 || v > n || seen[v - 1]) return false;
    seen[v - 1] = 1;
  }
  return true;
}

}  // namespace

std::optional<Arborescence> detect_restricted(std::span<const int> w2,
                                              std::span<const int> w1,
                                              std::span<const int> w0,
                                              EventTrace* trace) {
  const int n = static_cast<int>(w2.size());
  if (w1.size() != w2.size() || w0.size() != w2.size())
    throw StructureError("detect_restricted: vectors of unequal length");

  EventTrace ev;
  ev.a = all_ones(w2);
  ev.b = (w1[0] == 1);
  std::vector<int> perm(n);
  perm[0] = w0[0];
  for (int l = 2; l <= n; ++l) perm[l - 1] = w1[l - 1];
  ev.c = is_permutation_of_states(perm, n);

  std::optional<Arborescence> tree;
  if (n == 1) {
    // No edges; the trivial one-state arborescence.
    tree = Arborescence{1, 1, {0}};
    ev.d = true;
  } else {
    std::vector<int> src(w1.begin() + 1, w1.end());
    std::vector<int> dst(w0.begin() + 1, w0.end());
    tree = edges_to_arborescence(src, dst, n);
    ev.d = tree.has_value();
  }
  if (trace) *trace = ev;
  if (!ev.success()) return std::nullopt;
  // C pins the unique source-free vertex to X_1(t).
  if (tree->root != w0[0])
    throw StructureError("detect_restricted: root differs from X_1(t)");
  return tree;
}

std::optional<Arborescence> detect_general(std::span<const std::vector<int>> window,
                                           const OffsetVector& u, EventTrace* trace) {
  if (window.empty()) throw StructureError("detect_general: empty window");
  const int n = static_cast<int>(window[0].size());
  if (window.size() != static_cast<std::size_t>(2 * n + 1))
    throw StructureError("detect_general: window must hold 2n+1 vectors");
  if (u.u.size() != static_cast<std::size_t>(n + 1))
    throw StructureError("detect_general: offset vector must have n+1 entries");
  for (int v : u.u)
    if (v < 1 || v > n) throw StructureError("detect_general: offset outside [n]");

  EventTrace ev;
  ev.a = all_ones(window[0]);
  ev.b = (window[u.u[0]][0] == 1);

  std::vector<int> perm(n);
  perm[0] = window[u.u[0] + u.u[1]][0];
  for (int l = 2; l <= n; ++l) perm[l - 1] = window[u.u[l]][l - 1];
  ev.c = is_permutation_of_states(perm, n);

  std::optional<Arborescence> tree;
  if (n == 1) {
    tree = Arborescence{1, 1, {0}};
    ev.d = true;
  } else {
    std::vector<int> src(n - 1), dst(n - 1);
    for (int l = 2; l <= n; ++l) {
      src[l - 2] = window[u.u[l]][l - 1];
      dst[l - 2] = window[u.u[l] + 1][l - 1];
    }
    tree = edges_to_arborescence(src, dst, n);
    ev.d = tree.has_value();
  }
  if (trace) *trace = ev;
  if (!ev.success()) return std::nullopt;
  if (tree->root != perm[0])
    throw StructureError("detect_general: root differs from the C-event entry");
  return tree;
}

SampleResult run_restricted(EnsembleSource& src, std::optional<long> max_blocks) {
  std::vector<int> w2 = src.next();  // t = 0
  std::vector<int> w1 = src.next();  // t = 1
  long t = 2;
  long blocks = 0;
  while (true) {
    const std::vector<int>& w0 = src.next();  // time t
    ++blocks;
    if (auto tree = detect_restricted(w2, w1, w0)) {
      SampleResult r;
      r.tree = std::move(*tree);
      r.root = r.tree.root;
      r.tau = t;
      r.blocks_examined = blocks;
      return r;
    }
    if (max_blocks && blocks >= *max_blocks) throw BudgetExceededError(blocks);
    w2 = w0;            // the block at t+2 reuses the vector at t
    w1 = src.next();    // t + 1
    t += 2;
  }
}

SampleResult run_general(EnsembleSource& src, RngStream& rng,
                         std::optional<long> max_blocks) {
  std::vector<std::vector<int>> window;
  window.push_back(src.next());  // t = 0
  const int n = static_cast<int>(window[0].size());
  window.resize(2 * n + 1);

  long t = 0;
  long blocks = 0;
  bool first = true;
  OffsetVector u;
  u.u.resize(n + 1);
  while (true) {
    // Advance to the next block boundary; consecutive windows share the
    // boundary vector.
    if (!first) window[0] = std::move(window[2 * n]);
    first = false;
    for (int i = 1; i <= 2 * n; ++i) window[i] = src.next();
    t += 2 * n;
    ++blocks;

    // Offsets are drawn unconditionally every block, in index order.
    for (int i = 0; i <= n; ++i) u.u[i] = rng.uniform_index(n);

    if (auto tree = detect_general(window, u)) {
      SampleResult r;
      r.tree = std::move(*tree);
      r.root = r.tree.root;
      r.tau = t;
      r.blocks_examined = blocks;
      r.offsets = u;
      return r;
    }
    if (max_blocks && blocks >= *max_blocks) throw BudgetExceededError(blocks);
  }
}

namespace {

ReplicationOutcome run_one(const ReplicateConfig& cfg, const TransitionMatrix& p,
                           std::uint64_t seed, long index) {
  const int n = p.size();
  RngStream chain_rng(seed, 4 * static_cast<std::uint64_t>(index));
  RngStream offset_rng(seed, 4 * static_cast<std::uint64_t>(index) + 1);
  RngStream init_rng(seed, 4 * static_cast<std::uint64_t>(index) + 2);

  std::vector<int> init;
  switch (cfg.init) {
    case InitPolicy::AllOnes:
      init.assign(n, 1);
      break;
    case InitPolicy::Fixed:
      init = cfg.fixed_init;
      break;
    case InitPolicy::Random:
      init.resize(n);
      for (int& s : init) s = init_rng.uniform_index(n);
      break;
  }

  SimulatedEnsembleSource src(p, std::move(init), chain_rng);
  ReplicationOutcome out;
  try {
    SampleResult r = cfg.mode == SamplerMode::Restricted
                         ? run_restricted(src, cfg.max_blocks)
                         : run_general(src, offset_rng, cfg.max_blocks);
    out.tau = r.tau;
    out.root = r.root;
    out.tree_key = canonical_encode(r.tree);
    out.blocks = r.blocks_examined;
    if (r.offsets) out.offsets = r.offsets->u;
  } catch (const BudgetExceededError& e) {
    out.censored = true;
    out.blocks = e.blocks_examined();
  }
  return out;
}

}  // namespace

std::vector<ReplicationOutcome> replicate(const ReplicateConfig& cfg,
                                          const TransitionMatrix& p, long count,
                                          std::uint64_t seed) {
  if (count < 1) throw std::domain_error("replicate: count must be >= 1");
  if (cfg.init == InitPolicy::Fixed &&
      cfg.fixed_init.size() != static_cast<std::size_t>(p.size()))
    throw StructureError("replicate: fixed init vector has wrong length");

  std::vector<ReplicationOutcome> results(count);
  int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (long i = 0; i < count; ++i) results[i] = run_one(cfg, p, seed, i);
    return results;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (long i = w; i < count; i += threads)
        results[i] = run_one(cfg, p, seed, i);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace arbor
