#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dyncon/approximation.hpp"
#include "dyncon/types.hpp"

namespace dyncon {

struct Decision {
  Value value = 0;
  Round round = 0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

struct ConsensusState {
  Value x = 0;
  bool locked = false;
  Round lock_round = 0;
  bool decided = false;
  std::optional<Decision> decision;

  friend bool operator==(const ConsensusState&, const ConsensusState&) = default;
};

enum class MessageKind { kLock, kDecide };

struct ConsensusMessage {
  MessageKind kind = MessageKind::kLock;
  Round lock_round = 0;  // meaningful for kLock only
  Value x = 0;

  friend bool operator==(const ConsensusMessage&, const ConsensusMessage&) = default;
};

/// Both halves of what one process sends in one round.
struct PackedMessage {
  ApproxMessage approx;
  ConsensusMessage cons;
};

enum class EventKind { kLock, kUnlock, kAdopt, kDecide };

std::string_view to_string(EventKind kind);

/// Something that happened at one process during one round computation.
/// lock_round and value are the state values right after the event.
struct ConsensusEvent {
  EventKind kind = EventKind::kLock;
  Round lock_round = 0;
  Value value = 0;

  friend bool operator==(const ConsensusEvent&, const ConsensusEvent&) = default;
};

struct StepOptions {
  int D = 1;
  /// Alternative reading of the unlock branch: also reset lockRound to 0.
  bool unlock_resets_lock_round = false;
};

/// inStableRoot of the co-located approximation, already bound to the current round.
using StablePredicate = std::function<bool(Interval)>;

struct StepResult {
  ConsensusState state;
  std::vector<ConsensusEvent> events;
  bool conflicting_decides = false;  // DECIDE messages with different values arrived
};

ConsensusState cons_init(Value input);

ConsensusMessage cons_emit(const ConsensusState& state);

StepResult cons_step(ConsensusState state, Round r,
                     std::span<const std::pair<ProcessId, ConsensusMessage>> received,
                     const StablePredicate& in_stable_root, const StepOptions& options);

PackedMessage pack(ApproxMessage approx, ConsensusMessage cons);
std::pair<ApproxMessage, ConsensusMessage> unpack(PackedMessage msg);

}  // namespace dyncon
