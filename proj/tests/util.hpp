#pragma once

#include <vector>

#include "dyncon/rng.hpp"
#include "dyncon/round_graph.hpp"

namespace testutil {

using dyncon::Edge;
using dyncon::GraphSequence;
using dyncon::ProcessId;
using dyncon::ProcessSet;
using dyncon::Round;
using dyncon::RoundGraph;

inline GraphSequence seq_of(int n, const std::vector<std::vector<Edge>>& rounds) {
  std::vector<RoundGraph> gs;
  for (const auto& e : rounds) gs.emplace_back(n, e);
  return GraphSequence(n, std::move(gs));
}

inline GraphSequence static_seq(int n, const std::vector<Edge>& edges, Round T) {
  return seq_of(n, std::vector<std::vector<Edge>>(T, edges));
}

inline std::vector<Edge> cycle(const ProcessSet& order) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < order.size() && order.size() > 1; ++i) {
    e.emplace_back(order[i], order[(i + 1) % order.size()]);
  }
  return e;
}

// Arbitrary digraph, each edge present with probability num/den.
inline RoundGraph random_graph(dyncon::Rng& rng, int n, int num, int den) {
  std::vector<Edge> e;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && rng.chance(num, den)) e.emplace_back(a, b);
  return RoundGraph(n, e);
}

inline GraphSequence random_seq(dyncon::Rng& rng, int n, Round T, int num = 1, int den = 3) {
  std::vector<RoundGraph> gs;
  for (Round r = 0; r < T; ++r) gs.push_back(random_graph(rng, n, num, den));
  return GraphSequence(n, std::move(gs));
}

// Processes [0, k) stay strongly connected with a fresh random topology every
// round; the others only receive edges, so [0, k) is also the single root.
inline GraphSequence stable_scc_seq(dyncon::Rng& rng, int k, int extra, Round T) {
  const int n = k + extra;
  std::vector<RoundGraph> gs;
  for (Round r = 0; r < T; ++r) {
    ProcessSet order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    rng.shuffle(std::span<ProcessId>(order));
    std::vector<Edge> e = cycle(order);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (a != b && rng.chance(1, 5)) e.emplace_back(a, b);
    for (int v = k; v < n; ++v) e.emplace_back(static_cast<int>(rng.below(v)), v);
    gs.emplace_back(n, e);
  }
  return GraphSequence(n, std::move(gs));
}

}  // namespace testutil
