#include <doctest.h>

#include "dyncon/consensus.hpp"
#include "dyncon/harness.hpp"
#include "util.hpp"

using namespace dyncon;

namespace {

using Inbox = std::vector<std::pair<ProcessId, ConsensusMessage>>;

StablePredicate constant(bool value) {
  return [value](Interval) { return value; };
}

ConsensusMessage lock_msg(Round lr, Value x) { return {MessageKind::kLock, lr, x}; }
ConsensusMessage decide_msg(Value x) { return {MessageKind::kDecide, 0, x}; }

Scenario static_scenario(int n, const std::vector<Edge>& edges, Round T, int D, std::vector<Value> inputs) {
  Scenario s;
  s.n = n;
  s.D = D;
  s.inputs = std::move(inputs);
  s.rounds = testutil::static_seq(n, edges, T);
  s.meta.generator = "test";
  s.meta.assumption = "ASSUMPTION_1";
  return s;
}

}  // namespace

TEST_CASE("cons_init") {
  CHECK(cons_init(7) == ConsensusState{7, false, 0, false, std::nullopt});
  CHECK(cons_init(0) == ConsensusState{0, false, 0, false, std::nullopt});
  CHECK(cons_init(4) == cons_init(4));
}

TEST_CASE("cons_emit") {
  CHECK(cons_emit({5, true, 3, false, std::nullopt}) == lock_msg(3, 5));
  CHECK(cons_emit({5, false, 2, true, Decision{5, 9}}) == decide_msg(5));
  CHECK(cons_emit(cons_init(9)) == lock_msg(0, 9));
}

TEST_CASE("cons_step rules") {
  const StepOptions opt{2, false};

  SUBCASE("decided is absorbing") {
    const ConsensusState done{4, false, 3, true, Decision{4, 8}};
    const Inbox in{{1, decide_msg(9)}, {2, lock_msg(20, 20)}};
    const StepResult res = cons_step(done, 9, in, constant(true), opt);
    CHECK(res.state == done);
    CHECK(res.events.empty());
  }
  SUBCASE("DECIDE is adopted") {
    const Inbox in{{1, lock_msg(7, 100)}, {2, decide_msg(4)}};
    const StepResult res = cons_step(cons_init(1), 6, in, constant(false), opt);
    CHECK(res.state.decided);
    CHECK(res.state.x == 4);
    CHECK(res.state.decision == Decision{4, 6});
    CHECK_FALSE(res.conflicting_decides);
  }
  SUBCASE("conflicting DECIDEs adopt the maximum and are flagged") {
    const Inbox in{{1, decide_msg(4)}, {2, decide_msg(2)}};
    const StepResult res = cons_step(cons_init(1), 6, in, constant(false), opt);
    CHECK(res.state.x == 4);
    CHECK(res.conflicting_decides);
  }
  SUBCASE("lexicographic maximum, lock round first") {
    const Inbox in{{1, lock_msg(3, 1)}, {2, lock_msg(2, 50)}, {3, lock_msg(3, 0)}};
    const StepResult res = cons_step(cons_init(10), 6, in, constant(false), opt);
    CHECK(res.state.lock_round == 3);
    CHECK(res.state.x == 1);
    CHECK_FALSE(res.state.locked);
  }
  SUBCASE("lock then decide") {
    std::vector<Interval> asked;
    const StablePredicate pred = [&](Interval i) {
      asked.push_back(i);
      return true;
    };
    StepResult res = cons_step(cons_init(3), 6, {}, pred, opt);
    CHECK(asked == std::vector<Interval>{{3, 4}});
    CHECK(res.state.locked);
    CHECK(res.state.lock_round == 6);
    CHECK(res.events == std::vector<ConsensusEvent>{{EventKind::kLock, 6, 3}});
    asked.clear();
    res = cons_step(res.state, 8, {}, pred, opt);
    CHECK(asked == std::vector<Interval>{{5, 6}, {6, 8}});
    CHECK(res.state.decision == Decision{3, 8});
  }
  SUBCASE("unlock keeps the max-updated lock round") {
    const ConsensusState locked{5, true, 4, false, std::nullopt};
    const Inbox in{{1, lock_msg(6, 2)}};
    StepResult res = cons_step(locked, 9, in, constant(false), opt);
    CHECK_FALSE(res.state.locked);
    CHECK(res.state.lock_round == 6);
    CHECK(res.state.x == 2);
    CHECK(res.events == std::vector<ConsensusEvent>{{EventKind::kUnlock, 6, 2}});
    res = cons_step(locked, 9, in, constant(false), {2, true});
    CHECK(res.state.lock_round == 0);
  }
  SUBCASE("windows before round 1 never hold") {
    const StepResult res = cons_step(cons_init(1), 2, {}, [](Interval i) { return i.first >= 1; }, opt);
    CHECK_FALSE(res.state.locked);
  }
}

TEST_CASE("pack and unpack") {
  for (int i = 0; i < 3; ++i) {
    ApproxState a = approx_init(i, 4);
    if (i > 0) a.add_label(i - 1, i, i);
    const ConsensusMessage c{i % 2 ? MessageKind::kDecide : MessageKind::kLock, i, 10 * i};
    const auto [a2, c2] = unpack(pack(approx_emit(a), c));
    CHECK(a2.sender == i);
    CHECK(a2.graph == a);
    CHECK(c2 == c);
  }
}

TEST_CASE("single process decides its input") {
  const Trace t = run(static_scenario(1, {}, 5, 1, {9}));
  REQUIRE(t.decisions[0]);
  CHECK(t.decisions[0]->value == 9);
  // Locks in round 3 on [1,2]; [3,4] is first entirely in the past in round 5.
  CHECK(t.at(3).events.front().kind == EventKind::kLock);
  CHECK(t.decisions[0]->round == 5);
}

TEST_CASE("static 3-cycle decides the largest input by round 10") {
  const Trace t = run(static_scenario(3, testutil::cycle({0, 1, 2}), 12, 2, {1, 5, 3}));
  for (const auto& d : t.decisions) {
    REQUIRE(d);
    CHECK(d->value == 5);
    CHECK(d->round <= 10);
  }
}
