#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyncon/graph_core.hpp"
#include "dyncon/harness.hpp"
#include "dyncon/scenario.hpp"

namespace dyncon {

enum class VerdictStatus { kPass, kFail, kSkipped, kInconclusive };

std::string_view to_string(VerdictStatus status);

struct Witness {
  std::optional<Round> round;
  ProcessSet processes;
  std::vector<Value> values;
  std::string note;
};

struct CheckerVerdict {
  std::string name;
  VerdictStatus status = VerdictStatus::kPass;
  std::string detail;
  std::optional<Witness> witness;  // set on failure

  bool failed() const { return status == VerdictStatus::kFail; }
};

/// Every decision equals every other one.
CheckerVerdict check_agreement(const Trace& trace);
/// Every decision is some process's input.
CheckerVerdict check_validity(const Trace& trace);
/// Everyone decides by r_ST + 4D + 1. Skipped when the assumption fails,
/// inconclusive when the trace ends before the bound.
CheckerVerdict check_termination_bound(const Trace& trace, const Scenario& scenario, const Oracle& oracle);
/// Per-round approximation lemmas against the oracle. Uses the trace's stored
/// states if present, otherwise replays the approximation and checks digests.
CheckerVerdict check_approx_invariants(const Trace& trace, const Scenario& scenario, const Oracle& oracle);
/// Structure around the first decision: stable root around the lock round,
/// timing, who locked, and equal estimates. Skipped without a decision or when
/// the assumption's global clauses fail.
CheckerVerdict check_lock_discipline(const Trace& trace, const Scenario& scenario, const Oracle& oracle);

struct CheckSelection {
  bool termination = true;
  bool approx = true;
  bool lock_discipline = true;
};

std::vector<CheckerVerdict> check_all(const Trace& trace, const Scenario& scenario, const Oracle& oracle,
                                      const CheckSelection& selection = {});

bool any_failed(const std::vector<CheckerVerdict>& verdicts);

/// "NAME STATUS" plus detail and witness, one line.
std::string verdict_line(const CheckerVerdict& verdict);
std::string verdicts_to_json(const std::vector<CheckerVerdict>& verdicts);

}  // namespace dyncon
