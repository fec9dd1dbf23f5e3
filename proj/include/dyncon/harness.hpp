#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dyncon/approximation.hpp"
#include "dyncon/consensus.hpp"
#include "dyncon/scenario.hpp"

namespace dyncon {

struct RunOptions {
  /// Drop approximation labels older than 4D+1 rounds at the end of each round.
  bool prune = false;
  std::optional<Round> horizon_override;  // run only the first rounds
  /// Keep every process's full approximation after every round (memory heavy).
  bool keep_states = false;
};

struct Delivery {
  ProcessId sender = 0;
  ConsensusMessage cons;
  std::uint64_t approx_digest = 0;  // digest of the snapshot that was delivered

  friend bool operator==(const Delivery&, const Delivery&) = default;
};

struct ProcessSnapshot {
  std::uint64_t approx_digest = 0;
  ConsensusState cons;

  friend bool operator==(const ProcessSnapshot&, const ProcessSnapshot&) = default;
};

struct TraceEvent {
  ProcessId process = 0;
  EventKind kind = EventKind::kLock;
  Round lock_round = 0;
  Value value = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct PredicateEval {
  ProcessId process = 0;
  Interval interval;
  bool result = false;

  friend bool operator==(const PredicateEval&, const PredicateEval&) = default;
};

struct RoundRecord {
  Round round = 0;
  std::vector<std::vector<Delivery>> delivered;  // indexed by receiver, senders ascending
  std::vector<ProcessSnapshot> states_after;     // indexed by process
  std::vector<TraceEvent> events;
  std::vector<PredicateEval> predicate_evals;
  std::vector<ProcessId> conflicting_decides;  // receivers of differing DECIDE values

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct Trace {
  std::uint64_t scenario_digest = 0;
  int n = 0;
  int D = 1;
  Round horizon = 0;
  bool prune = false;
  std::vector<Value> inputs;
  std::vector<std::uint64_t> initial_digests;
  std::vector<RoundRecord> rounds;
  std::vector<std::optional<Decision>> decisions;
  /// approx_states[r-1][p], filled only with RunOptions::keep_states.
  std::vector<std::vector<ApproxState>> approx_states;

  const RoundRecord& at(Round r) const { return rounds.at(r - 1); }
};

/// Oldest round a pruned run keeps after finishing round r.
inline Round prune_keep_after(Round r, int D) { return r - 4 * D > 0 ? r - 4 * D : 0; }

/// Lock-step execution of both algorithms over the scenario's rounds.
Trace run(const Scenario& scenario, const RunOptions& options = {});

/// Approximation states after every round, recomputed without consensus.
/// visit(r, states) is called for r = 1..horizon.
void replay_approximation(const Scenario& scenario, Round horizon, bool prune,
                          const std::function<void(Round, const std::vector<ApproxState>&)>& visit);

/// JSON-lines: a header line, one line per round, then a summary line with the
/// decisions. `verdicts_json` (a JSON array, may be empty) goes into the summary.
std::string trace_to_jsonl(const Trace& trace, const std::string& verdicts_json = "[]");
/// Inverse of trace_to_jsonl (approximation states are not part of the file).
/// Throws kParseError.
Trace trace_from_jsonl(const std::string& text);

}  // namespace dyncon
