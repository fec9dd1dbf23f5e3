#pragma once

// Slow, obviously-correct reference computations used only by the tests.
// Nothing here calls into graph_core.

#include <algorithm>
#include <functional>
#include <vector>

#include "dyncon/round_graph.hpp"
#include "dyncon/types.hpp"

namespace ref {

using dyncon::Distance;
using dyncon::GraphSequence;
using dyncon::ProcessId;
using dyncon::ProcessSet;
using dyncon::Round;
using dyncon::RoundGraph;

// Enumerates every walk p = v0, v1, ..., vk where each step either stays put or
// follows an edge of G^{r+i}, and returns the smallest k that ends at q.
inline Distance chain_distance(const GraphSequence& seq, Round r, ProcessId p, ProcessId q) {
  if (p == q) return 1;
  const Round T = seq.horizon();
  Distance best = dyncon::kInfinity;
  std::function<void(ProcessId, Round, int)> walk = [&](ProcessId v, Round round, int steps) {
    if (steps >= best) return;
    if (v == q && steps > 0) {
      best = steps;
      return;
    }
    if (round > T) return;
    const RoundGraph& g = seq.at(round);
    walk(v, round + 1, steps + 1);
    for (ProcessId w = 0; w < seq.n(); ++w) {
      if (g.has_edge(v, w)) walk(w, round + 1, steps + 1);
    }
  };
  walk(p, r, 0);
  return best;
}

inline std::vector<std::vector<bool>> closure(const RoundGraph& g) {
  const int n = g.n();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& [a, b] : g.edges()) reach[a][b] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  return reach;
}

// Components by mutual reachability, sorted by smallest member.
inline std::vector<ProcessSet> sccs(const RoundGraph& g) {
  const auto reach = closure(g);
  std::vector<ProcessSet> out;
  std::vector<bool> used(g.n(), false);
  for (int i = 0; i < g.n(); ++i) {
    if (used[i]) continue;
    ProcessSet c;
    for (int j = 0; j < g.n(); ++j) {
      if (reach[i][j] && reach[j][i]) {
        c.push_back(j);
        used[j] = true;
      }
    }
    out.push_back(c);
  }
  return out;
}

inline std::vector<ProcessSet> roots(const RoundGraph& g) {
  std::vector<ProcessSet> out;
  for (const auto& c : sccs(g)) {
    bool entered = false;
    for (const auto& [a, b] : g.edges()) {
      const bool a_in = std::binary_search(c.begin(), c.end(), a);
      const bool b_in = std::binary_search(c.begin(), c.end(), b);
      if (!a_in && b_in) entered = true;
    }
    if (!entered) out.push_back(c);
  }
  return out;
}

// Largest chain distance from `from` to `to` starting in round x.
inline Distance round_diameter(const GraphSequence& seq, Round x, const ProcessSet& from,
                               const ProcessSet& to) {
  Distance d = 1;
  for (ProcessId p : from)
    for (ProcessId q : to) d = std::max(d, chain_distance(seq, x, p, q));
  return d;
}

// Max over start rounds x in [r, s] whose propagation also ends in [r, s].
inline Distance interval_diameter(const GraphSequence& seq, Round r, Round s, const ProcessSet& from,
                                  const ProcessSet& to) {
  Distance d = dyncon::kInfinity;
  for (Round x = r; x <= s; ++x) {
    const Distance dx = round_diameter(seq, x, from, to);
    if (dyncon::is_finite(dx) && x + dx - 1 <= s) d = d == dyncon::kInfinity ? dx : std::max(d, dx);
  }
  return d;
}

inline ProcessSet all(int n) {
  ProcessSet v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace ref
