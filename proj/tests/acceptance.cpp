// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "dyncon/adversary.hpp"
#include "dyncon/batch.hpp"
#include "dyncon/checkers.hpp"
#include "dyncon/cli.hpp"
#include "dyncon/graph_core.hpp"
#include "dyncon/harness.hpp"
#include "reference.hpp"
#include "util.hpp"

using namespace dyncon;
namespace fs = std::filesystem;

namespace {

// Every comparison below is exact; only wall-clock budgets have slack.
constexpr double kBatchBudgetSeconds = 60.0;
constexpr double kExpanderBudgetSeconds = 300.0;

int failures = 0;

void report(int k, bool ok, const std::string& detail) {
  std::cout << "criterion " << k << ": " << (ok ? "PASS" : "FAIL") << " " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const CheckerVerdict* find(const std::vector<CheckerVerdict>& vs, const std::string& name) {
  for (const auto& v : vs)
    if (v.name == name) return &v;
  return nullptr;
}

std::vector<BatchRow> stable_rows;

void termination() {
  BatchConfig cfg;
  cfg.gen = "stable_window";
  for (std::uint64_t s = 1; s <= 500; ++s) cfg.seeds.push_back(s);
  cfg.n_min = 3;
  cfg.n_max = 16;
  cfg.d_min = 2;
  const auto t0 = std::chrono::steady_clock::now();
  stable_rows = run_batch(cfg);
  const double took = seconds_since(t0);

  int bad = 0;
  int max_slack_used = 0;
  std::string first_bad;
  for (const auto& r : stable_rows) {
    const auto* term = find(r.verdicts, "TERMINATION");
    const bool ok = r.error.empty() && r.r_st && r.bound && *r.bound == *r.r_st + 4 * r.D + 1 && r.decided == r.n &&
                    r.last_decision && *r.last_decision <= *r.bound && term && term->status == VerdictStatus::kPass &&
                    r.D >= 2 && r.D <= r.n - 1;
    if (!ok) {
      if (bad++ == 0) first_bad = "seed " + std::to_string(r.seed) + (r.error.empty() ? "" : ": " + r.error);
    } else {
      max_slack_used = std::max(max_slack_used, *r.last_decision - *r.r_st);
    }
  }
  std::ostringstream d;
  d << stable_rows.size() << " stable-window scenarios, " << bad << " violations, latest decision r_ST+"
    << max_slack_used << ", " << static_cast<int>(took * 10) / 10.0 << "s";
  if (bad) d << " (first: " << first_bad << ")";
  report(1, bad == 0 && stable_rows.size() == 500 && took < kBatchBudgetSeconds, d.str());
}

void safety() {
  int bad = 0;
  for (const auto& r : stable_rows) {
    for (const char* name : {"AGREEMENT", "VALIDITY"}) {
      const auto* v = find(r.verdicts, name);
      if (!v || v->status != VerdictStatus::kPass) ++bad;
    }
  }
  BatchConfig cfg;
  cfg.gen = "churn";
  for (std::uint64_t s = 1; s <= 500; ++s) cfg.seeds.push_back(s);
  cfg.checks = {false, false, false};
  const auto rows = run_batch(cfg);
  int with_window = 0;
  int decided_runs = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) ++bad;
    if (r.r_st) ++with_window;
    if (r.decided > 0) ++decided_runs;
    for (const char* name : {"AGREEMENT", "VALIDITY"}) {
      const auto* v = find(r.verdicts, name);
      if (!v || v->status != VerdictStatus::kPass) ++bad;
    }
  }
  std::ostringstream d;
  d << stable_rows.size() << " stable-window + " << rows.size() << " no-window scenarios, " << bad
    << " safety violations, " << with_window << " with a window, " << decided_runs << " no-window runs decided";
  report(2, bad == 0 && with_window == 0 && rows.size() == 500, d.str());
}

void approximation() {
  int bad = 0;
  int total = 0;
  std::string first_bad;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(mix_seed(seed, 3));
    const int n = rng.between(3, 8);
    const int D = rng.between(1, n - 1);
    Scenario s;
    if (seed % 2) {
      StableWindowConfig cfg;
      cfg.seed = seed;
      cfg.n = n;
      cfg.D = D;
      cfg.r_st = rng.between(1, 5);
      s = gen_stable_window(cfg);
    } else {
      ChurnConfig cfg;
      cfg.seed = seed;
      cfg.n = n;
      cfg.D = D;
      cfg.horizon = 40;
      s = gen_churn(cfg);
    }
    if (s.n > 8 || s.horizon() > 40) ++bad;
    const Oracle oracle(s.rounds);
    const CheckerVerdict v = check_approx_invariants(run(s), s, oracle);
    ++total;
    if (v.status != VerdictStatus::kPass) {
      if (bad++ == 0) first_bad = "seed " + std::to_string(seed) + ": " + verdict_line(v);
    }
  }
  std::ostringstream d;
  d << total << " scenarios (n<=8, T<=40), " << bad << " failures";
  if (bad) d << " (first: " << first_bad << ")";
  report(3, bad == 0, d.str());
}

void causal_bounds() {
  Rng rng(404);
  int bound_bad = 0;
  int mono_bad = 0;
  long checked = 0;
  for (int i = 0; i < 200; ++i) {
    const int k = 2 + i % 7;
    const Round r = rng.between(1, 3);
    const Round s = r + k - 2 + rng.between(0, 3);
    // Arbitrary rounds before r, then the vertex-stable part [r, s].
    const auto prefix = testutil::random_seq(rng, k + 2, r - 1);
    const auto stable = testutil::stable_scc_seq(rng, k, 2, s - r + 1);
    std::vector<RoundGraph> rounds = prefix.rounds();
    rounds.insert(rounds.end(), stable.rounds().begin(), stable.rounds().end());
    const Oracle oracle(GraphSequence(k + 2, rounds));
    ProcessSet c(k);
    for (int j = 0; j < k; ++j) c[j] = j;
    const Distance d = oracle.scc_causal_diameter({r, s}, c).interval_diameter;
    if (!is_finite(d) || d > k - 1) ++bound_bad;
    for (Round x = 1; x < oracle.horizon(); ++x)
      for (ProcessId p = 0; p < oracle.n(); ++p)
        for (ProcessId q = 0; q < oracle.n(); ++q) {
          const Distance a = oracle.causal_distance(x, p, q);
          const Distance b = oracle.causal_distance(x + 1, p, q);
          ++checked;
          if (is_finite(a) ? (is_finite(b) && b < a - 1) : is_finite(b)) ++mono_bad;
        }
  }
  std::ostringstream d;
  d << "200 stable SCC instances, " << bound_bad << " above |C|-1; " << checked << " (p,q,r) triples, " << mono_bad
    << " monotonicity violations";
  report(4, bound_bad == 0 && mono_bad == 0, d.str());
}

void worked_example() {
  const Scenario s = gen_complete_then_rings(3);
  const Oracle oracle(s.rounds);
  const auto rep = oracle.scc_causal_diameter({1, 3}, {0, 1, 2, 3});
  bool incomplete = false;
  for (ProcessId p = 0; p < 4; ++p)
    for (ProcessId q = 0; q < 4; ++q) incomplete = incomplete || !is_finite(oracle.causal_distance(2, p, q));
  std::ostringstream d;
  d << "D(C^[1,3])=" << rep.interval_diameter << ", round-2 start "
    << (incomplete ? "incomplete" : "complete") << " by round 3";
  report(5, rep.interval_diameter == 1 && incomplete && !is_finite(rep.per_round_diameter[1]), d.str());
}

void two_roots() {
  const Scenario s = gen_two_roots(2, 2, 60);
  const CheckerVerdict v = check_agreement(run(s));
  const bool ok = v.status == VerdictStatus::kFail && v.witness && v.witness->values == std::vector<Value>{0, 1};
  report(6, ok, verdict_line(v));
}

void expander() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    std::map<int, Distance> dm;
    for (int n : {64, 128, 256}) {
      ExpanderConfig cfg;
      cfg.seed = seed;
      cfg.n = n;
      cfg.root_size = n / 8;
      cfg.degree = 4;
      const Scenario s = gen_expander(cfg);
      dm[n] = Oracle(s.rounds).network_causal_diameter({1, s.horizon()});
    }
    // Dm(256) <= Dm(64) + c * (log2 256 - log2 64) with c = Dm(64) / log2 64.
    const bool seed_ok = is_finite(dm[64]) && is_finite(dm[256]) && 6 * dm[256] <= 6 * dm[64] + 2 * dm[64];
    ok = ok && seed_ok;
    d << "seed " << seed << ": Dm=" << dm[64] << "/" << dm[128] << "/" << dm[256] << "; ";
  }
  const double took = seconds_since(t0);
  d << static_cast<int>(took * 10) / 10.0 << "s";
  report(7, ok && took < kExpanderBudgetSeconds, d.str());
}

void oracle_self_check() {
  Rng rng(88);
  long compared = 0;
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = rng.between(1, 5);
    const Round T = rng.between(1, 6);
    const auto seq = testutil::random_seq(rng, n, T, 1, rng.between(2, 6));
    const Oracle oracle(seq);
    for (Round r = 1; r <= T; ++r)
      for (ProcessId p = 0; p < n; ++p)
        for (ProcessId q = 0; q < n; ++q) {
          ++compared;
          if (oracle.causal_distance(r, p, q) != ref::chain_distance(seq, r, p, q)) ++bad;
        }
  }
  report(8, bad == 0, "50 instances, " + std::to_string(compared) + " distances, " + std::to_string(bad) + " mismatches");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism() {
  const fs::path dir = fs::temp_directory_path() / ("dyncon_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<Scenario> scenarios;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    StableWindowConfig cfg;
    cfg.seed = seed;
    cfg.n = 3 + static_cast<int>(seed % 6);
    cfg.D = 1 + static_cast<int>(seed % (cfg.n - 1));
    scenarios.push_back(gen_stable_window(cfg));
  }
  for (std::uint64_t seed = 1; seed <= 4; ++seed) scenarios.push_back(gen_churn({seed, 6, 3, 30}));
  scenarios.push_back(gen_two_roots(2, 3, 30));
  scenarios.push_back(gen_short_window({}));
  scenarios.push_back(gen_reversing_line(5, 6, 30));
  scenarios.push_back(gen_complete_then_rings(3));

  int bad = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const std::string scen = (dir / ("s" + std::to_string(i) + ".json")).string();
    scenario_save(scenarios[i], scen);
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const std::string trace = (dir / ("t" + std::to_string(k) + ".jsonl")).string();
      const std::string rep = (dir / ("r" + std::to_string(k) + ".json")).string();
      const char* argv[] = {"dyncon", "run", "--scenario", scen.c_str(), "--trace", trace.c_str(), "--report", rep.c_str()};
      std::ostringstream out;
      std::ostringstream err;
      const int code = run_cli(8, argv, out, err);
      outputs[k] = std::to_string(code) + out.str() + err.str() + "\x1f" + slurp(trace) + "\x1f" + slurp(rep);
    }
    if (outputs[0] != outputs[1] || outputs[0].size() < 100) ++bad;
  }
  fs::remove_all(dir);
  report(9, bad == 0 && scenarios.size() == 20,
         std::to_string(scenarios.size()) + " scenarios run twice, " + std::to_string(bad) + " differ");
}

void pruning() {
  int bad = 0;
  int decided = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Scenario s = batch_scenario(BatchConfig{}, seed, std::nullopt);
    RunOptions pruned;
    pruned.prune = true;
    const Trace a = run(s);
    const Trace b = run(s, pruned);
    if (a.decisions != b.decisions) ++bad;
    for (const auto& d : a.decisions) decided += d ? 1 : 0;
  }
  report(10, bad == 0,
         "100 scenarios, window 4D+1, " + std::to_string(bad) + " with different decisions (" +
             std::to_string(decided) + " decisions compared)");
}

}  // namespace

int main() {
  termination();
  safety();
  approximation();
  causal_bounds();
  worked_example();
  two_roots();
  expander();
  oracle_self_check();
  determinism();
  pruning();
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed" : "acceptance: all criteria pass")
            << std::endl;
  return failures ? 1 : 0;
}
