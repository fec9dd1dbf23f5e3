#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dyncon/graph_core.hpp"
#include "dyncon/rng.hpp"
#include "dyncon/scenario.hpp"

namespace dyncon {

struct StableWindowConfig {
  std::uint64_t seed = 1;
  int n = 4;
  int D = 3;
  Round r_st = 1;
  Round window_len = 0;  // 0 means the minimum, 4D+2
  Round horizon = 0;     // 0 means r_st + window_len - 1 + 2
};

/// Single root every round; [r_st, r_st+window_len-1] has a frozen,
/// D-bounded root while its topology still changes. Throws kInfeasible.
Scenario gen_stable_window(const StableWindowConfig& cfg);

struct ChurnConfig {
  std::uint64_t seed = 1;
  int n = 4;
  int D = 3;
  Round horizon = 40;
};

/// Single root every round, every vertex-stable root interval D-bounded, but
/// none longer than 4D+1 rounds: safe to run, no termination promised.
Scenario gen_churn(const ChurnConfig& cfg);

/// Each round an independent random digraph, repaired to have one root. D is
/// drawn from [1, n-1]; nothing else is promised.
Scenario gen_random_single_root(const ChurnConfig& cfg);

Scenario gen_static_line(int n, Round horizon);
Scenario gen_static_star(int n, Round horizon);
/// Line rooted at 0 for rounds <= kappa, reversed (rooted at n-1) afterwards.
Scenario gen_reversing_line(int n, Round kappa, Round horizon);

/// Strongly connected C0 (inputs 0) and C1 (inputs 1), both feeding one extra
/// process: two roots in every round.
Scenario gen_two_roots(int n0, int n1, Round horizon);

/// Four processes: complete graph in round 1, a fixed directed ring afterwards.
Scenario gen_complete_then_rings(Round horizon = 3);

struct ShortWindowConfig {
  int n = 4;
  int D = 3;
  Round window_start = 4;
  Round horizon = 30;
  /// Adds this many rounds to the D-round stable window.
  Round extend = 0;
};

/// A vertex-stable root window of exactly D (+extend) rounds during which one
/// process stays at causal distance D from the root. Throws kInfeasible.
Scenario gen_short_window(const ShortWindowConfig& cfg);

struct ExpanderConfig {
  std::uint64_t seed = 1;
  int n = 64;
  int root_size = 8;
  int degree = 4;
  bool reshuffle = true;
  Round horizon = 0;  // 0 picks a horizon comfortably above the expected diameter
};

struct ExpansionSample {
  double min_ratio = 0;  // smallest |N+(S)| / |S| seen
  int samples = 0;
};

/// Random d-regular graphs on R and on all processes, bidirected, with every
/// edge into R from outside removed. D is set to the measured network causal
/// diameter. Throws kInfeasible.
Scenario gen_expander(const ExpanderConfig& cfg);

/// Random d-regular simple graph (adjacency lists, sorted). Throws kInfeasible.
std::vector<std::vector<int>> random_regular_graph(Rng& rng, int n, int degree);

/// Samples sets S with R subset of S and |S| <= n/2 in every round and reports
/// the smallest out-expansion |N+(S)|/|S| (N+ excludes S itself).
ExpansionSample sample_expansion(const Scenario& scenario, const ProcessSet& root, int samples,
                                 std::uint64_t seed);

/// Assumption tag the oracle supports for bound D.
std::string classify(const Oracle& oracle, int D);

/// Re-derives the tag; throws kInfeasible if the scenario's own tag disagrees.
void post_validate(const Scenario& scenario, const Oracle& oracle);

/// One layer-structured round graph: `root` is its single root component and
/// every process is within causal distance D of every root member.
RoundGraph layered_round(Rng& rng, int n, const ProcessSet& root, const std::vector<int>& level);

/// Random level assignment for the non-root processes (0 for root members),
/// with at most D - (|root| - 1) nonempty levels.
std::vector<int> random_levels(Rng& rng, int n, int D, const ProcessSet& root);

/// Random root set that keeps the layered construction feasible for D.
ProcessSet random_root(Rng& rng, int n, int D, const std::optional<ProcessSet>& avoid_a,
                       const std::optional<ProcessSet>& avoid_b);

}  // namespace dyncon
