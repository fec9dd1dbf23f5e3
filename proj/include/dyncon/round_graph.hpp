#pragma once

#include <span>
#include <vector>

#include "dyncon/types.hpp"

namespace dyncon {

/// Communication graph of one round. Simple, loop-free, vertices [0, n).
/// Edges are kept sorted so every derived output is deterministic.
class RoundGraph {
 public:
  RoundGraph() = default;

  /// Duplicate edges are merged. Throws kInvalidArgument on self-loops or
  /// endpoints outside [0, n).
  RoundGraph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// N_q: processes q hears from in this round, sorted.
  std::span<const ProcessId> in_neighbors(ProcessId q) const;
  std::span<const ProcessId> out_neighbors(ProcessId p) const;

  bool has_edge(ProcessId from, ProcessId to) const;

  friend bool operator==(const RoundGraph& a, const RoundGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> out_offsets_;
  std::vector<ProcessId> out_targets_;
  std::vector<int> in_offsets_;
  std::vector<ProcessId> in_sources_;
};

/// Finite prefix G^1..G^T of a round-graph sequence. Indexing is 1-based.
class GraphSequence {
 public:
  GraphSequence() = default;
  GraphSequence(int n, std::vector<RoundGraph> rounds);

  int n() const { return n_; }
  Round horizon() const { return static_cast<Round>(rounds_.size()); }

  /// Throws kOutOfRange unless 1 <= r <= horizon().
  const RoundGraph& at(Round r) const;

  const std::vector<RoundGraph>& rounds() const { return rounds_; }

  /// First `horizon` rounds (clamped to the available ones).
  GraphSequence prefix(Round horizon) const;

  friend bool operator==(const GraphSequence&, const GraphSequence&) = default;

 private:
  int n_ = 0;
  std::vector<RoundGraph> rounds_;
};

}  // namespace dyncon
