#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dyncon/round_graph.hpp"
#include "dyncon/types.hpp"

namespace dyncon {

struct ScenarioMeta {
  std::string generator;
  std::uint64_t seed = 0;
  std::string assumption;  // ASSUMPTION_1, ASSUMPTION_2 or VIOLATION(kind)
  std::optional<Round> claimed_r_st;
  /// Unlock branch also resets lockRound to 0 (off by default).
  bool unlock_resets_lock_round = false;

  friend bool operator==(const ScenarioMeta&, const ScenarioMeta&) = default;
};

/// Everything that determines a run: the graph prefix, the inputs and the
/// diameter bound handed to the algorithm. Claims in `meta` are advisory.
struct Scenario {
  int n = 0;
  int D = 1;
  std::vector<Value> inputs;
  GraphSequence rounds;
  ScenarioMeta meta;

  Round horizon() const { return rounds.horizon(); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws kInvalidArgument if n, D, inputs or rounds disagree.
void validate(const Scenario& scenario);

/// Canonical JSON text (sorted keys, sorted edges, trailing newline).
std::string scenario_to_json(const Scenario& scenario);
/// Throws kParseError with a line or field diagnostic.
Scenario scenario_from_json(const std::string& text);

void scenario_save(const Scenario& scenario, const std::string& path);
Scenario scenario_load(const std::string& path);

/// FNV-1a of the canonical JSON.
std::uint64_t scenario_digest(const Scenario& scenario);

std::string hex64(std::uint64_t value);

}  // namespace dyncon
