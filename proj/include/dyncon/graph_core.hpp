#pragma once

#include <optional>
#include <vector>

#include "dyncon/causal_kernels.hpp"
#include "dyncon/round_graph.hpp"
#include "dyncon/types.hpp"

namespace dyncon {

/// Maximal strongly connected components, each sorted, ordered by smallest member.
std::vector<ProcessSet> scc_decompose(const RoundGraph& g);

struct RootReport {
  std::vector<ProcessSet> roots;  // SCCs without in-edges from outside
  bool is_single() const { return roots.size() == 1; }
};

RootReport root_components(const RoundGraph& g);

/// cd_r(p, q) relative to the horizon of `seq`. Throws kOutOfRange unless
/// 1 <= r <= horizon and p, q are valid.
Distance causal_distance(const GraphSequence& seq, Round r, ProcessId p, ProcessId q);

/// Whether a D-boundedness check looks at causal distances inside the
/// component only, or from the (root) component to every process.
enum class DiameterScope { kComponent, kNetwork };

struct StableIntervalReport {
  Interval interval;
  ProcessSet vertex_set;
  std::vector<Distance> per_round_diameter;          // D^x(C), x in interval
  Distance interval_diameter = kInfinity;            // D(C^I)
  std::vector<Distance> per_round_network_diameter;  // D^x, x in interval
  Distance network_interval_diameter = kInfinity;    // D^I
  std::optional<int> d_bounded_for;                  // smallest D it is D-bounded for
};

struct StabilityReport {
  std::vector<StableIntervalReport> intervals;  // maximal single-root intervals
  std::vector<Round> multi_root_rounds;
};

/// Outcome of searching for the stability window of the liveness assumption.
struct RstReport {
  std::optional<Round> r_st;
  std::vector<Round> multi_root_rounds;
  /// Vertex-stable root intervals of length >= D that are not D-bounded.
  std::vector<Interval> unbounded_intervals;

  bool global_clauses_hold() const {
    return multi_root_rounds.empty() && unbounded_intervals.empty();
  }
  bool assumption_holds() const { return r_st.has_value() && global_clauses_hold(); }
};

/// Ground truth for a finite graph sequence. Everything is computed at
/// construction (roots per round and the full causal-distance table), so a
/// const Oracle is safe to share between threads.
///
/// All answers are relative to the horizon: a chain that would need rounds
/// past T counts as never completing.
class Oracle {
 public:
  explicit Oracle(GraphSequence seq);

  const GraphSequence& sequence() const { return seq_; }
  int n() const { return seq_.n(); }
  Round horizon() const { return seq_.horizon(); }

  const RootReport& roots(Round r) const;
  /// Vertex set of the unique root of round r, or nullopt with several roots.
  std::optional<ProcessSet> single_root(Round r) const;

  Distance causal_distance(Round r, ProcessId p, ProcessId q) const;
  const CausalTable& table() const { return table_; }

  /// D^x(C): largest cd_x(p, q) over p, q in members.
  Distance component_round_diameter(Round x, const ProcessSet& members) const;

  /// D^x: largest cd_x(p, q) over p in R^x and q in Pi. Throws kMultipleRoots.
  Distance network_round_diameter(Round x) const;

  /// D(C^I). Throws kNotVertexStable unless members are an SCC in every round of I.
  StableIntervalReport scc_causal_diameter(Interval interval, const ProcessSet& members) const;

  /// D^I. Throws kMultipleRoots if a round of I has several roots.
  Distance network_causal_diameter(Interval interval) const;

  StabilityReport vertex_stable_intervals() const;

  /// D-boundedness: D >= interval diameter and D^{s-D+1} <= D. Throws
  /// kNotVertexStable unless members are vertex-stable over the interval (a
  /// stable SCC for kComponent, the stable root for kNetwork).
  bool check_d_bounded(Interval interval, const ProcessSet& members, int D,
                       DiameterScope scope = DiameterScope::kComponent) const;

  /// Smallest r such that [r, r+4D+1] hosts a D-bounded vertex-stable root
  /// component, plus the assumption's per-round and global clauses.
  RstReport find_r_st(int D) const;

  /// Smallest r such that [r, r+D] is a vertex-stable root interval with D^I <= D
  /// (the weaker window of length D+1 used to contrast too-short windows).
  std::optional<Round> find_short_window(int D) const;

  bool is_scc_in_round(Round r, const ProcessSet& members) const;

 private:
  Distance max_over(Round x, const ProcessSet& from, bool to_all, const ProcessSet& to) const;
  static Distance interval_diameter(Interval interval, const std::vector<Distance>& per_round);
  bool d_bounded_from_rounds(Interval interval, int D, Distance interval_diam,
                             Distance late_start_diam) const;
  Distance network_round_diameter_or_inf(Round x) const;

  GraphSequence seq_;
  std::vector<RootReport> roots_;
  CausalTable table_;
  std::vector<Distance> network_diam_;  // D^x per round; kInfinity on multi-root rounds
};

}  // namespace dyncon
