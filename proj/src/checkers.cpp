#include "dyncon/checkers.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace dyncon {

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kPass: return "PASS";
    case VerdictStatus::kFail: return "FAIL";
    case VerdictStatus::kSkipped: return "SKIPPED";
    case VerdictStatus::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

CheckerVerdict pass(std::string name, std::string detail = {}) {
  return {std::move(name), VerdictStatus::kPass, std::move(detail), std::nullopt};
}

CheckerVerdict skipped(std::string name, std::string detail) {
  return {std::move(name), VerdictStatus::kSkipped, std::move(detail), std::nullopt};
}

CheckerVerdict fail(std::string name, std::string detail, Witness w) {
  return {std::move(name), VerdictStatus::kFail, std::move(detail), std::move(w)};
}

std::string set_str(const ProcessSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::string interval_str(Interval i) {
  return "[" + std::to_string(i.first) + "," + std::to_string(i.last) + "]";
}

// Root component of round s that contains p, if p is in one.
const ProcessSet* root_containing(const Oracle& oracle, Round s, ProcessId p) {
  for (const auto& comp : oracle.roots(s).roots) {
    if (std::binary_search(comp.begin(), comp.end(), p)) return &comp;
  }
  return nullptr;
}

bool contains(const ProcessSet& s, ProcessId p) { return std::binary_search(s.begin(), s.end(), p); }

}  // namespace

CheckerVerdict check_agreement(const Trace& trace) {
  const std::string name = "AGREEMENT";
  std::optional<ProcessId> first;
  for (ProcessId p = 0; p < static_cast<ProcessId>(trace.decisions.size()); ++p) {
    const auto& d = trace.decisions[p];
    if (!d) continue;
    if (!first) {
      first = p;
      continue;
    }
    const Decision& a = *trace.decisions[*first];
    if (d->value != a.value) {
      std::set<Value> values;
      for (const auto& e : trace.decisions) {
        if (e) values.insert(e->value);
      }
      Witness w;
      w.round = std::max(a.round, d->round);
      w.processes = {*first, p};
      w.values.assign(values.begin(), values.end());
      w.note = "p" + std::to_string(*first) + " decided " + std::to_string(a.value) + " in round " +
               std::to_string(a.round) + ", p" + std::to_string(p) + " decided " + std::to_string(d->value) +
               " in round " + std::to_string(d->round);
      return fail(name, "conflicting decisions", std::move(w));
    }
  }
  return pass(name, first ? "" : "no decisions");
}

CheckerVerdict check_validity(const Trace& trace) {
  const std::string name = "VALIDITY";
  const std::set<Value> inputs(trace.inputs.begin(), trace.inputs.end());
  for (ProcessId p = 0; p < static_cast<ProcessId>(trace.decisions.size()); ++p) {
    const auto& d = trace.decisions[p];
    if (d && !inputs.count(d->value)) {
      return fail(name, "decision is nobody's input", {d->round, {p}, {d->value}, "not an input value"});
    }
  }
  return pass(name);
}

CheckerVerdict check_termination_bound(const Trace& trace, const Scenario& scenario, const Oracle& oracle) {
  const std::string name = "TERMINATION";
  const int D = scenario.D;
  const RstReport rst = oracle.find_r_st(D);
  if (!rst.assumption_holds()) {
    std::string why = !rst.multi_root_rounds.empty() ? "several roots in round " + std::to_string(rst.multi_root_rounds.front())
                      : !rst.unbounded_intervals.empty()
                          ? "stable interval " + interval_str(rst.unbounded_intervals.front()) + " not D-bounded"
                          : "no stability window";
    return skipped(name, "assumption does not hold: " + why);
  }
  const Round bound = *rst.r_st + 4 * D + 1;
  for (ProcessId p = 0; p < trace.n; ++p) {
    const auto& d = trace.decisions[p];
    if (d && d->round > bound) {
      return fail(name, "decided after r_ST+4D+1=" + std::to_string(bound),
                  {d->round, {p}, {d->value}, "decision round " + std::to_string(d->round)});
    }
  }
  if (trace.horizon < bound) {
    return {name, VerdictStatus::kInconclusive,
            "horizon " + std::to_string(trace.horizon) + " ends before r_ST+4D+1=" + std::to_string(bound), std::nullopt};
  }
  for (ProcessId p = 0; p < trace.n; ++p) {
    if (!trace.decisions[p]) {
      return fail(name, "undecided at r_ST+4D+1=" + std::to_string(bound), {bound, {p}, {}, "never decided"});
    }
  }
  return pass(name, "r_ST=" + std::to_string(*rst.r_st) + " bound=" + std::to_string(bound));
}

CheckerVerdict check_approx_invariants(const Trace& trace, const Scenario& scenario, const Oracle& oracle) {
  const std::string name = "APPROX_INVARIANTS";
  const Round T = trace.horizon;
  const int n = trace.n;
  const int D = scenario.D;

  // Oracle-side expectations. For start round x, root2cpr_until[x] is the
  // largest y such that [x,y] is a D-bounded stable root interval longer than
  // D; allrootdec_from[y] is the smallest such x for end round y.
  std::vector<Round> root2cpr_until(T + 1, 0);
  std::vector<Round> allrootdec_from(T + 1, 0);
  std::vector<const ProcessSet*> stable_root(T + 1, nullptr);
  const StabilityReport stability = oracle.vertex_stable_intervals();
  for (const auto& iv : stability.intervals) {
    const Round a = iv.interval.first;
    const Round b = std::min(iv.interval.last, T);
    for (Round r = a; r <= b; ++r) stable_root[r] = &iv.vertex_set;
    for (Round x = a; x + D <= b; ++x) {
      for (Round y = x + D; y <= b; ++y) {
        if (!oracle.check_d_bounded({x, y}, iv.vertex_set, D, DiameterScope::kNetwork)) continue;
        root2cpr_until[x] = y;
        if (allrootdec_from[y] == 0) allrootdec_from[y] = x;
      }
    }
  }

  std::optional<CheckerVerdict> failure;
  auto failed = [&](Round t, ProcessId p, const std::string& lemma, const std::string& note) {
    if (!failure) failure = fail(name, lemma, {t, {p}, {}, note});
  };

  auto check_round = [&](Round t, const std::vector<ApproxState>& states) {
    if (failure) return;
    for (ProcessId p = 0; p < n && !failure; ++p) {
      const ApproxState& A = states[p];
      if (trace.approx_states.empty() && A.digest() != trace.at(t).states_after[p].approx_digest) {
        return failed(t, p, "REPLAY_MISMATCH", "recomputed approximation differs from the trace digest");
      }

      // A_p|s is a subgraph of G^s, and never holds only part of an in-neighborhood.
      std::set<std::pair<Round, ProcessId>> heard;
      for (const auto& e : A.edges()) {
        for (Round s : e.labels) {
          const std::string edge = std::to_string(e.from) + "->" + std::to_string(e.to) + " labeled " + std::to_string(s);
          if (s > t) return failed(t, p, "AsubsetG", "edge " + edge + " from a future round");
          if (!oracle.sequence().at(s).has_edge(e.from, e.to)) {
            return failed(t, p, "AsubsetG(i)", "edge " + edge + " is not in G^" + std::to_string(s));
          }
          heard.emplace(s, e.to);
        }
      }
      for (const auto& [s, w] : heard) {
        for (ProcessId v : oracle.sequence().at(s).in_neighbors(w)) {
          if (!A.has_label(v, w, s)) {
            return failed(t, p, "AsubsetG(ii)",
                          "in-edge " + std::to_string(v) + "->" + std::to_string(w) + " of round " +
                              std::to_string(s) + " missing while other in-edges of " + std::to_string(w) + " are known");
          }
        }
      }

      const Round lo = std::max<Round>(1, A.pruned_before());
      std::vector<ProcessSet> detected(t + 1);
      for (Round s = lo; s < t; ++s) {
        detected[s] = detected_component(A, s);
        if (detected[s].empty()) continue;
        const ProcessSet* root = root_containing(oracle, s, p);
        if (!root) {
          return failed(t, p, "Cpr2root", "C_p|" + std::to_string(s) + "=" + set_str(detected[s]) +
                                              " but p is in no root component of round " + std::to_string(s));
        }
        if (detected[s] != *root) {
          return failed(t, p, "Cpr2root", "C_p|" + std::to_string(s) + "=" + set_str(detected[s]) +
                                              " differs from root " + set_str(*root));
        }
      }

      // Stable-root detection within latency D.
      for (Round x = lo; x + D <= t; ++x) {
        if (root2cpr_until[x] < t || !stable_root[x] || !contains(*stable_root[x], p)) continue;
        if (detected[x] != *stable_root[x]) {
          return failed(t, p, "root2Cpr", "C_p|" + std::to_string(x) + "=" + set_str(detected[x]) +
                                              " expected " + set_str(*stable_root[x]));
        }
      }
      const Round from = allrootdec_from[t];
      if (from >= lo && from > 0 && stable_root[t] && contains(*stable_root[t], p)) {
        if (!in_stable_root(A, {from, t - D}, t)) {
          return failed(t, p, "allrootdec",
                        "inStableRoot(" + interval_str({from, t - D}) + ") false at the end of round " + std::to_string(t));
        }
      }
    }
  };

  if (!trace.approx_states.empty()) {
    for (Round t = 1; t <= T; ++t) check_round(t, trace.approx_states[t - 1]);
  } else {
    replay_approximation(scenario, T, trace.prune, check_round);
  }
  if (failure) return *failure;

  // A true predicate only ever covers rounds in which p was in a root component.
  for (const auto& rec : trace.rounds) {
    for (const auto& e : rec.predicate_evals) {
      if (!e.result) continue;
      for (Round s = e.interval.first; s <= e.interval.last; ++s) {
        if (s < 1 || s >= rec.round || !root_containing(oracle, s, e.process)) {
          return fail(name, "stable2root",
                      {rec.round, {e.process}, {},
                       "inStableRoot(" + interval_str(e.interval) + ") true but p not in a root of round " + std::to_string(s)});
        }
      }
    }
  }
  return pass(name);
}

CheckerVerdict check_lock_discipline(const Trace& trace, const Scenario& scenario, const Oracle& oracle) {
  const std::string name = "LOCK_DISCIPLINE";
  const int D = scenario.D;
  const RstReport rst = oracle.find_r_st(D);
  if (!rst.global_clauses_hold()) return skipped(name, "assumption's global clauses fail");

  std::optional<Round> first;
  for (const auto& d : trace.decisions) {
    if (d && (!first || d->round < *first)) first = d->round;
  }
  if (!first) return skipped(name, "no decision");
  const Round r = *first;
  const RoundRecord& rec = trace.at(r);

  for (ProcessId p = 0; p < trace.n; ++p) {
    const auto& d = trace.decisions[p];
    if (!d || d->round != r) continue;
    const Round ell = rec.states_after[p].cons.lock_round;
    auto bad = [&](const std::string& item, const std::string& note, ProcessSet who = {}) {
      if (who.empty()) who = {p};
      return fail(name, item, {r, std::move(who), {d->value}, "lockRound=" + std::to_string(ell) + ": " + note});
    };

    if (!(ell + D <= r && r <= ell + 2 * D)) return bad("item (ii)", "decision round outside [l+D, l+2D]");

    const Interval I{ell - D - 1, ell + D};
    if (I.first < 1 || I.last > oracle.horizon()) return bad("item (i)", "interval " + interval_str(I) + " outside the rounds");
    const auto root = oracle.single_root(I.first);
    if (!root || !contains(*root, p)) return bad("item (i)", "p not in the single root of round " + std::to_string(I.first));
    for (Round s = I.first + 1; s <= I.last; ++s) {
      if (oracle.single_root(s) != root) {
        return bad("item (i)", "root not vertex-stable over " + interval_str(I) + " (round " + std::to_string(s) + ")");
      }
    }
    if (I.first - 1 >= 1 && oracle.single_root(I.first - 1) == root) {
      return bad("item (iii)", "same root already in round " + std::to_string(I.first - 1));
    }

    std::set<ProcessId> locked_at_ell;
    for (const auto& e : trace.at(ell).events) {
      if (e.kind == EventKind::kLock) locked_at_ell.insert(e.process);
    }
    for (ProcessId q : *root) {
      if (!locked_at_ell.count(q)) return bad("item (iv)", "root member did not lock in round l", {q});
    }
    for (Round s = ell; s <= r; ++s) {
      for (const auto& e : trace.at(s).events) {
        if (e.kind == EventKind::kLock && !contains(*root, e.process)) {
          return bad("item (iv)", "non-member locked in round " + std::to_string(s), {e.process});
        }
      }
    }

    // Identical estimates when the first decision round starts.
    const auto x_at_start = [&](ProcessId q) {
      return r == 1 ? trace.inputs[q] : trace.at(r - 1).states_after[q].cons.x;
    };
    for (ProcessId q = 0; q < trace.n; ++q) {
      if (x_at_start(q) != d->value) {
        return fail(name, "identical proposals",
                    {r, {p, q}, {d->value, x_at_start(q)}, "estimate differs at the start of the first decision round"});
      }
    }
  }
  return pass(name, "first decision in round " + std::to_string(r));
}

std::vector<CheckerVerdict> check_all(const Trace& trace, const Scenario& scenario, const Oracle& oracle,
                                      const CheckSelection& selection) {
  std::vector<CheckerVerdict> out{check_agreement(trace), check_validity(trace)};
  if (selection.termination) out.push_back(check_termination_bound(trace, scenario, oracle));
  if (selection.approx) out.push_back(check_approx_invariants(trace, scenario, oracle));
  if (selection.lock_discipline) out.push_back(check_lock_discipline(trace, scenario, oracle));
  return out;
}

bool any_failed(const std::vector<CheckerVerdict>& verdicts) {
  return std::any_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.failed(); });
}

std::string verdict_line(const CheckerVerdict& v) {
  std::string out = v.name + " " + std::string(to_string(v.status));
  if (!v.detail.empty()) out += " " + v.detail;
  if (v.witness) {
    const Witness& w = *v.witness;
    out += " [";
    if (w.round) out += "round=" + std::to_string(*w.round) + " ";
    out += "processes=" + set_str(w.processes);
    if (!w.values.empty()) {
      out += " values={";
      for (std::size_t i = 0; i < w.values.size(); ++i) out += (i ? "," : "") + std::to_string(w.values[i]);
      out += "}";
    }
    if (!w.note.empty()) out += " " + w.note;
    out += "]";
  }
  return out;
}

std::string verdicts_to_json(const std::vector<CheckerVerdict>& verdicts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : verdicts) {
    nlohmann::json j{{"name", v.name}, {"status", to_string(v.status)}, {"detail", v.detail}};
    if (v.witness) {
      j["witness"] = {{"round", v.witness->round ? nlohmann::json(*v.witness->round) : nlohmann::json(nullptr)},
                      {"processes", v.witness->processes},
                      {"values", v.witness->values},
                      {"note", v.witness->note}};
    }
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

}  // namespace dyncon
