#pragma once

#include <vector>

#include "dyncon/round_graph.hpp"
#include "dyncon/types.hpp"

namespace dyncon {

/// cd_r(p, q) for every start round r in [1, T] and every pair (p, q).
class CausalTable {
 public:
  CausalTable() = default;
  CausalTable(int n, Round horizon)
      : n_(n), horizon_(horizon),
        data_(static_cast<std::size_t>(horizon) * n * n, kInfinity) {}

  int n() const { return n_; }
  Round horizon() const { return horizon_; }

  Distance at(Round r, ProcessId p, ProcessId q) const { return data_[index(r, p, q)]; }
  Distance& at(Round r, ProcessId p, ProcessId q) { return data_[index(r, p, q)]; }

  /// Row cd_r(p, .) as a contiguous block of n entries.
  const Distance* row(Round r, ProcessId p) const { return &data_[index(r, p, 0)]; }
  Distance* row(Round r, ProcessId p) { return &data_[index(r, p, 0)]; }

  friend bool operator==(const CausalTable&, const CausalTable&) = default;

 private:
  std::size_t index(Round r, ProcessId p, ProcessId q) const {
    return (static_cast<std::size_t>(r - 1) * n_ + p) * n_ + q;
  }

  int n_ = 0;
  Round horizon_ = 0;
  std::vector<Distance> data_;
};

/// Breadth-first sweep over the time-expanded graph from (p, round r):
/// out[q] = cd_r(p, q), kInfinity when no chain completes by the horizon.
/// `out` must hold seq.n() entries.
void causal_sweep(const GraphSequence& seq, Round r, ProcessId p, Distance* out);

/// Reference implementation: one sweep per (r, p), sequentially.
CausalTable causal_table_serial(const GraphSequence& seq);

/// Same table with the (r, p) sweeps distributed over OpenMP threads.
CausalTable causal_table(const GraphSequence& seq);

/// Only the rows whose source is in sources[r-1]; other rows stay kInfinity.
CausalTable causal_table_rows(const GraphSequence& seq,
                              const std::vector<ProcessSet>& sources);

}  // namespace dyncon
