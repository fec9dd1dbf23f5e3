#include "dyncon/consensus.hpp"

#include <algorithm>
#include <tuple>

namespace dyncon {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kLock: return "lock";
    case EventKind::kUnlock: return "unlock";
    case EventKind::kAdopt: return "adopt";
    case EventKind::kDecide: return "decide";
  }
  return "?";
}

ConsensusState cons_init(Value input) {
  ConsensusState state;
  state.x = input;
  return state;
}

ConsensusMessage cons_emit(const ConsensusState& state) {
  if (state.decided) return {MessageKind::kDecide, 0, state.x};
  return {MessageKind::kLock, state.lock_round, state.x};
}

StepResult cons_step(ConsensusState state, Round r,
                     std::span<const std::pair<ProcessId, ConsensusMessage>> received,
                     const StablePredicate& in_stable_root, const StepOptions& options) {
  StepResult result;
  auto finish = [&]() {
    result.state = std::move(state);
    return std::move(result);
  };
  if (state.decided) return finish();

  std::optional<Value> adopted;
  for (const auto& [sender, msg] : received) {
    if (msg.kind != MessageKind::kDecide) continue;
    if (adopted && *adopted != msg.x) result.conflicting_decides = true;
    adopted = adopted ? std::max(*adopted, msg.x) : msg.x;
  }
  if (adopted) {
    state.x = *adopted;
    state.decided = true;
    state.decision = Decision{state.x, r};
    result.events.push_back({EventKind::kAdopt, state.lock_round, state.x});
    result.events.push_back({EventKind::kDecide, state.lock_round, state.x});
    return finish();
  }

  std::pair<Round, Value> best{state.lock_round, state.x};
  for (const auto& [sender, msg] : received) best = std::max(best, std::pair{msg.lock_round, msg.x});
  std::tie(state.lock_round, state.x) = best;

  const int D = options.D;
  if (in_stable_root({r - D - 1, r - D})) {
    if (!state.locked) {
      state.locked = true;
      state.lock_round = r;
      result.events.push_back({EventKind::kLock, state.lock_round, state.x});
    } else if (in_stable_root({state.lock_round, state.lock_round + D})) {
      state.decided = true;
      state.decision = Decision{state.x, r};
      result.events.push_back({EventKind::kDecide, state.lock_round, state.x});
    }
  } else {
    if (state.locked) result.events.push_back({EventKind::kUnlock, state.lock_round, state.x});
    state.locked = false;
    if (options.unlock_resets_lock_round) state.lock_round = 0;
  }
  return finish();
}

PackedMessage pack(ApproxMessage approx, ConsensusMessage cons) {
  return {std::move(approx), cons};
}

std::pair<ApproxMessage, ConsensusMessage> unpack(PackedMessage msg) {
  return {std::move(msg.approx), msg.cons};
}

}  // namespace dyncon
