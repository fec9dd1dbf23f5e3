#include "dyncon/harness.hpp"

#include <sstream>

#include <json.hpp>

#include "dyncon/error.hpp"

namespace dyncon {

using nlohmann::json;

Trace run(const Scenario& scenario, const RunOptions& options) {
  validate(scenario);
  const int n = scenario.n;
  const int D = scenario.D;
  Round horizon = scenario.horizon();
  if (options.horizon_override) {
    if (*options.horizon_override < 1 || *options.horizon_override > horizon) {
      throw Error(ErrorCode::kInvalidArgument, "horizon override " + std::to_string(*options.horizon_override) +
                                                   " outside [1," + std::to_string(horizon) + "]");
    }
    horizon = *options.horizon_override;
  }
  const StepOptions step_options{D, scenario.meta.unlock_resets_lock_round};

  Trace trace;
  trace.scenario_digest = scenario_digest(scenario);
  trace.n = n;
  trace.D = D;
  trace.horizon = horizon;
  trace.prune = options.prune;
  trace.inputs = scenario.inputs;

  std::vector<ApproxState> approx;
  std::vector<ConsensusState> cons;
  std::vector<std::uint64_t> digests;
  for (ProcessId p = 0; p < n; ++p) {
    approx.push_back(approx_init(p, n));
    cons.push_back(cons_init(scenario.inputs[p]));
    digests.push_back(approx.back().digest());
  }
  trace.initial_digests = digests;

  std::vector<ApproxMessage> inbox;
  std::vector<std::pair<ProcessId, ConsensusMessage>> received;
  for (Round r = 1; r <= horizon; ++r) {
    const RoundGraph& g = scenario.rounds.at(r);
    RoundRecord rec;
    rec.round = r;
    rec.delivered.resize(n);

    // Everything sent in round r is fixed before anyone receives.
    std::vector<ConsensusMessage> outgoing;
    for (ProcessId p = 0; p < n; ++p) outgoing.push_back(cons_emit(cons[p]));

    std::vector<ApproxState> next_approx;
    std::vector<ConsensusState> next_cons;
    next_approx.reserve(n);
    next_cons.reserve(n);
    for (ProcessId q = 0; q < n; ++q) {
      inbox.clear();
      received.clear();
      for (ProcessId p : g.in_neighbors(q)) {
        inbox.push_back(approx_emit(approx[p]));
        received.emplace_back(p, outgoing[p]);
        rec.delivered[q].push_back({p, outgoing[p], digests[p]});
      }
      ApproxState a = approx_absorb(approx[q], r, inbox);
      const StablePredicate predicate = [&](Interval interval) {
        const bool value = in_stable_root(a, interval, r);
        rec.predicate_evals.push_back({q, interval, value});
        return value;
      };
      StepResult step = cons_step(cons[q], r, received, predicate, step_options);
      for (const auto& e : step.events) rec.events.push_back({q, e.kind, e.lock_round, e.value});
      if (step.conflicting_decides) rec.conflicting_decides.push_back(q);
      if (options.prune) a = approx_prune(std::move(a), prune_keep_after(r, D));
      next_approx.push_back(std::move(a));
      next_cons.push_back(std::move(step.state));
    }
    approx = std::move(next_approx);
    cons = std::move(next_cons);
    for (ProcessId p = 0; p < n; ++p) {
      digests[p] = approx[p].digest();
      rec.states_after.push_back({digests[p], cons[p]});
    }
    if (options.keep_states) trace.approx_states.push_back(approx);
    trace.rounds.push_back(std::move(rec));
  }
  for (const auto& c : cons) trace.decisions.push_back(c.decision);
  return trace;
}

void replay_approximation(const Scenario& scenario, Round horizon, bool prune,
                          const std::function<void(Round, const std::vector<ApproxState>&)>& visit) {
  const int n = scenario.n;
  std::vector<ApproxState> states;
  for (ProcessId p = 0; p < n; ++p) states.push_back(approx_init(p, n));
  std::vector<ApproxMessage> inbox;
  for (Round r = 1; r <= horizon; ++r) {
    const RoundGraph& g = scenario.rounds.at(r);
    std::vector<ApproxState> next;
    next.reserve(n);
    for (ProcessId q = 0; q < n; ++q) {
      inbox.clear();
      for (ProcessId p : g.in_neighbors(q)) inbox.push_back(approx_emit(states[p]));
      ApproxState s = approx_absorb(states[q], r, inbox);
      if (prune) s = approx_prune(std::move(s), prune_keep_after(r, scenario.D));
      next.push_back(std::move(s));
    }
    states = std::move(next);
    visit(r, states);
  }
}

namespace {

json decision_json(const std::optional<Decision>& d) {
  return d ? json{{"value", d->value}, {"round", d->round}} : json(nullptr);
}

json state_json(const ProcessSnapshot& s) {
  return {{"approx", hex64(s.approx_digest)},
          {"x", s.cons.x},
          {"locked", s.cons.locked},
          {"lock_round", s.cons.lock_round},
          {"decided", s.cons.decided},
          {"decision", decision_json(s.cons.decision)}};
}

std::string_view kind_name(MessageKind k) { return k == MessageKind::kDecide ? "DECIDE" : "LOCK"; }

}  // namespace

std::string trace_to_jsonl(const Trace& trace, const std::string& verdicts_json) {
  std::string out;
  json header{{"type", "header"},
              {"scenario_digest", hex64(trace.scenario_digest)},
              {"n", trace.n},
              {"D", trace.D},
              {"horizon", trace.horizon},
              {"prune", trace.prune},
              {"inputs", trace.inputs}};
  json initial = json::array();
  for (auto d : trace.initial_digests) initial.push_back(hex64(d));
  header["initial_approx"] = std::move(initial);
  out += header.dump() + "\n";

  for (const auto& rec : trace.rounds) {
    json delivered = json::array();
    for (const auto& inbox : rec.delivered) {
      json row = json::array();
      for (const auto& d : inbox) {
        row.push_back({d.sender, kind_name(d.cons.kind), d.cons.lock_round, d.cons.x, hex64(d.approx_digest)});
      }
      delivered.push_back(std::move(row));
    }
    json states = json::array();
    for (const auto& s : rec.states_after) states.push_back(state_json(s));
    json events = json::array();
    for (const auto& e : rec.events) {
      events.push_back({{"p", e.process}, {"kind", to_string(e.kind)}, {"lock_round", e.lock_round}, {"value", e.value}});
    }
    json preds = json::array();
    for (const auto& e : rec.predicate_evals) {
      preds.push_back({e.process, e.interval.first, e.interval.last, e.result});
    }
    json line{{"type", "round"},
              {"round", rec.round},
              {"delivered", std::move(delivered)},
              {"states", std::move(states)},
              {"events", std::move(events)},
              {"predicates", std::move(preds)},
              {"conflicting_decides", rec.conflicting_decides}};
    out += line.dump() + "\n";
  }

  json decisions = json::array();
  for (const auto& d : trace.decisions) decisions.push_back(decision_json(d));
  json summary{{"type", "summary"}, {"decisions", std::move(decisions)}};
  summary["verdicts"] = json::parse(verdicts_json);
  out += summary.dump() + "\n";
  return out;
}

namespace {

[[noreturn]] void trace_fail(int line, const std::string& why) {
  throw Error(ErrorCode::kParseError, "trace line " + std::to_string(line) + ": " + why);
}

std::uint64_t parse_hex(const json& v) { return std::stoull(v.get<std::string>(), nullptr, 16); }

std::optional<Decision> parse_decision(const json& v) {
  if (v.is_null()) return std::nullopt;
  return Decision{v.at("value").get<Value>(), v.at("round").get<Round>()};
}

EventKind parse_event_kind(const std::string& s) {
  for (auto k : {EventKind::kLock, EventKind::kUnlock, EventKind::kAdopt, EventKind::kDecide}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown event kind " + s);
}

}  // namespace

Trace trace_from_jsonl(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  bool saw_summary = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        trace.scenario_digest = parse_hex(j.at("scenario_digest"));
        trace.n = j.at("n").get<int>();
        trace.D = j.at("D").get<int>();
        trace.horizon = j.at("horizon").get<Round>();
        trace.prune = j.at("prune").get<bool>();
        trace.inputs = j.at("inputs").get<std::vector<Value>>();
        for (const auto& d : j.at("initial_approx")) trace.initial_digests.push_back(parse_hex(d));
        saw_header = true;
      } else if (type == "round") {
        if (!saw_header) trace_fail(line_no, "round before header");
        RoundRecord rec;
        rec.round = j.at("round").get<Round>();
        if (rec.round != static_cast<Round>(trace.rounds.size()) + 1) trace_fail(line_no, "rounds out of order");
        for (const auto& row : j.at("delivered")) {
          std::vector<Delivery> inbox;
          for (const auto& d : row) {
            Delivery del;
            del.sender = d.at(0).get<ProcessId>();
            del.cons.kind = d.at(1).get<std::string>() == "DECIDE" ? MessageKind::kDecide : MessageKind::kLock;
            del.cons.lock_round = d.at(2).get<Round>();
            del.cons.x = d.at(3).get<Value>();
            del.approx_digest = parse_hex(d.at(4));
            inbox.push_back(del);
          }
          rec.delivered.push_back(std::move(inbox));
        }
        for (const auto& s : j.at("states")) {
          ProcessSnapshot snap;
          snap.approx_digest = parse_hex(s.at("approx"));
          snap.cons.x = s.at("x").get<Value>();
          snap.cons.locked = s.at("locked").get<bool>();
          snap.cons.lock_round = s.at("lock_round").get<Round>();
          snap.cons.decided = s.at("decided").get<bool>();
          snap.cons.decision = parse_decision(s.at("decision"));
          rec.states_after.push_back(snap);
        }
        for (const auto& e : j.at("events")) {
          rec.events.push_back({e.at("p").get<ProcessId>(), parse_event_kind(e.at("kind").get<std::string>()),
                                e.at("lock_round").get<Round>(), e.at("value").get<Value>()});
        }
        for (const auto& e : j.at("predicates")) {
          rec.predicate_evals.push_back(
              {e.at(0).get<ProcessId>(), {e.at(1).get<Round>(), e.at(2).get<Round>()}, e.at(3).get<bool>()});
        }
        rec.conflicting_decides = j.at("conflicting_decides").get<std::vector<ProcessId>>();
        if (static_cast<int>(rec.states_after.size()) != trace.n ||
            static_cast<int>(rec.delivered.size()) != trace.n) {
          trace_fail(line_no, "expected " + std::to_string(trace.n) + " processes");
        }
        trace.rounds.push_back(std::move(rec));
      } else if (type == "summary") {
        for (const auto& d : j.at("decisions")) trace.decisions.push_back(parse_decision(d));
        saw_summary = true;
      } else {
        trace_fail(line_no, "unknown line type " + type);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      trace_fail(line_no, e.what());
    }
  }
  if (!saw_header) trace_fail(line_no, "missing header");
  if (!saw_summary) trace_fail(line_no, "missing summary");
  if (static_cast<Round>(trace.rounds.size()) != trace.horizon) trace_fail(line_no, "round count differs from horizon");
  return trace;
}

}  // namespace dyncon
