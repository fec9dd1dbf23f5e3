#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dyncon/types.hpp"

namespace dyncon {

struct LabeledEdge {
  ProcessId from = 0;
  ProcessId to = 0;
  std::vector<Round> labels;  // sorted, nonempty

  friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
};

/// A process's approximation of the past communication graphs: a digraph
/// without loops or multi-edges whose edges carry the set of rounds in which
/// they were observed.
///
/// Storage is a dense capacity x capacity matrix of round bitsets, so copying a
/// state (one snapshot per message) is a single allocation and merging is a
/// word-wise OR. The capacity is a storage bound only; the algorithm itself
/// never reads it.
class ApproxState {
 public:
  ApproxState() = default;
  ApproxState(ProcessId owner, int capacity);

  ProcessId owner() const { return owner_; }
  int capacity() const { return capacity_; }

  bool has_vertex(ProcessId v) const;
  ProcessSet vertices() const;

  bool has_label(ProcessId from, ProcessId to, Round s) const;
  std::vector<Round> labels(ProcessId from, ProcessId to) const;
  bool has_edge(ProcessId from, ProcessId to) const;
  std::vector<LabeledEdge> edges() const;  // sorted by (from, to)
  std::size_t edge_count() const;

  /// Labels below this round were discarded by pruning; those rounds read as "no data".
  Round pruned_before() const { return pruned_before_; }

  void add_vertex(ProcessId v);
  void add_label(ProcessId from, ProcessId to, Round s);
  /// Vertex and label union with another state of the same capacity.
  void merge(const ApproxState& other);
  void drop_labels_before(Round keep_after);

  /// Throws kMalformedMessage if the state violates its invariants.
  void validate() const;

  /// Sorted vertices, edges and labels; equal states produce equal strings.
  std::string canonical_json() const;
  std::uint64_t digest() const;

  friend bool operator==(const ApproxState& a, const ApproxState& b);

 private:
  std::size_t block(ProcessId from, ProcessId to) const {
    return (static_cast<std::size_t>(from) * capacity_ + to) * words_;
  }
  void ensure_round_capacity(Round s);

  ProcessId owner_ = 0;
  int capacity_ = 0;
  int words_ = 1;  // 64-bit words per label set; bit s = round s
  Round pruned_before_ = 0;
  std::vector<char> vertices_;
  std::vector<std::uint64_t> labels_;
};

struct ApproxMessage {
  ProcessId sender = 0;
  ApproxState graph;
};

/// Vertex set {owner} plus endpoints of round-s edges, and those edges.
struct ApproxSlice {
  ProcessSet vertices;
  std::vector<Edge> edges;
};

ApproxState approx_init(ProcessId p, int capacity);

ApproxMessage approx_emit(const ApproxState& state);

/// Round-r update from the snapshots of the in-neighbors of round r. Throws
/// kMalformedMessage if a snapshot is malformed.
ApproxState approx_absorb(ApproxState state, Round r, std::span<const ApproxMessage> received);

/// A_p|s.
ApproxSlice approx_restrict(const ApproxState& state, Round s);

/// C_p|s: vertex set of A_p|s if it is strongly connected (a lone vertex is),
/// otherwise empty. Pruned rounds yield the empty set.
ProcessSet detected_component(const ApproxState& state, Round s);

/// True iff every s in the interval has 1 <= s < current_round and the
/// detected components over the interval are identical and nonempty.
bool in_stable_root(const ApproxState& state, Interval interval, Round current_round);

/// Drops labels < keep_after and edges left without labels; vertices are kept.
ApproxState approx_prune(ApproxState state, Round keep_after);

}  // namespace dyncon
