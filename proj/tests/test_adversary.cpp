#include <doctest.h>

#include <filesystem>

#include "dyncon/adversary.hpp"
#include "dyncon/checkers.hpp"
#include "dyncon/error.hpp"
#include "dyncon/graph_core.hpp"
#include "dyncon/harness.hpp"

using namespace dyncon;

TEST_CASE("gen_stable_window") {
  StableWindowConfig cfg;
  cfg.seed = 1;
  cfg.n = 8;
  cfg.D = 7;
  cfg.r_st = 5;
  cfg.window_len = 30;
  cfg.horizon = 60;
  const Scenario s = gen_stable_window(cfg);
  CHECK(s.horizon() == 60);
  CHECK(s.meta.assumption == "ASSUMPTION_1");
  const RstReport rst = Oracle(s.rounds).find_r_st(7);
  REQUIRE(rst.r_st);
  CHECK(*rst.r_st <= 5);
  CHECK(rst.assumption_holds());
  CHECK(s.meta.claimed_r_st == rst.r_st);

  CHECK(scenario_to_json(gen_stable_window(cfg)) == scenario_to_json(s));
  cfg.seed = 2;
  CHECK(scenario_to_json(gen_stable_window(cfg)) != scenario_to_json(s));
}

TEST_CASE("gen_stable_window rejects infeasible parameters") {
  StableWindowConfig cfg;
  cfg.n = 4;
  cfg.D = 4;
  CHECK_THROWS_AS(gen_stable_window(cfg), Error);
  cfg.D = 0;
  CHECK_THROWS_AS(gen_stable_window(cfg), Error);
  cfg.D = 2;
  cfg.window_len = 8;  // needs at least 4D+2
  CHECK_THROWS_AS(gen_stable_window(cfg), Error);
  try {
    cfg.window_len = 5;
    gen_stable_window(cfg);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
}

TEST_CASE("property: stable_window outputs satisfy the assumption") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    StableWindowConfig cfg;
    cfg.seed = seed;
    cfg.n = 3 + static_cast<int>(seed % 8);
    cfg.D = 1 + static_cast<int>(seed % (cfg.n - 1));
    cfg.r_st = 1 + static_cast<Round>(seed % 5);
    const Scenario s = gen_stable_window(cfg);
    const Oracle oracle(s.rounds);
    const RstReport rst = oracle.find_r_st(cfg.D);
    REQUIRE(rst.assumption_holds());
    REQUIRE(*rst.r_st <= cfg.r_st);
    for (Round r = 1; r <= s.horizon(); ++r) REQUIRE(oracle.roots(r).is_single());
    // Vertex-stable roots of length >= n-1 never exceed the worst-case diameter.
    for (const auto& iv : oracle.vertex_stable_intervals().intervals) {
      if (iv.interval.length() >= cfg.n - 1) REQUIRE(iv.network_interval_diameter <= cfg.n - 1);
    }
  }
}

TEST_CASE("static constructions") {
  const Oracle line(gen_static_line(5, 10).rounds);
  for (Round r = 1; r <= 10; ++r) CHECK(line.single_root(r) == ProcessSet{0});

  const Oracle star(gen_static_star(4, 10).rounds);
  CHECK(star.single_root(3) == ProcessSet{0});
  CHECK(star.network_causal_diameter({1, 10}) == 1);

  const auto rev = Oracle(gen_reversing_line(5, 3, 20).rounds).vertex_stable_intervals();
  REQUIRE(rev.intervals.size() == 2);
  CHECK(rev.intervals[0].interval == Interval{1, 3});
  CHECK(rev.intervals[0].vertex_set == ProcessSet{0});
  CHECK(rev.intervals[1].interval == Interval{4, 20});
  CHECK(rev.intervals[1].vertex_set == ProcessSet{4});
}

TEST_CASE("gen_two_roots") {
  const Scenario s = gen_two_roots(2, 2, 60);
  CHECK(s.meta.assumption == "VIOLATION(two_roots)");
  const Oracle oracle(s.rounds);
  for (Round r = 1; r <= 60; ++r) CHECK(oracle.roots(r).roots == std::vector<ProcessSet>{{0, 1}, {2, 3}});
  CHECK_FALSE(oracle.find_r_st(s.D).r_st);

  const Trace t = run(s);
  for (ProcessId p : {0, 1}) CHECK(t.decisions[p]->value == 0);
  for (ProcessId p : {2, 3}) CHECK(t.decisions[p]->value == 1);
}

TEST_CASE("gen_complete_then_rings") {
  const Scenario s = gen_complete_then_rings();
  CHECK(s.n == 4);
  CHECK(s.horizon() == 3);
  CHECK(s.rounds.at(1).edge_count() == 12);
  const Oracle oracle(s.rounds);
  CHECK(oracle.scc_causal_diameter({1, 3}, {0, 1, 2, 3}).interval_diameter == 1);
  CHECK_FALSE(oracle.check_d_bounded({1, 3}, {0, 1, 2, 3}, 1));
}

TEST_CASE("gen_short_window") {
  for (int D = 2; D <= 5; ++D) {
    ShortWindowConfig cfg;
    cfg.n = D + 3;
    cfg.D = D;
    cfg.window_start = 4;
    const Scenario s = gen_short_window(cfg);
    const Oracle oracle(s.rounds);
    const auto stab = oracle.vertex_stable_intervals();
    bool found = false;
    for (const auto& iv : stab.intervals) {
      if (iv.interval.first != 4) continue;
      found = true;
      CHECK(iv.interval.length() == D);
      for (Round r = 4; r < 4 + D; ++r) CHECK(oracle.causal_distance(r, iv.vertex_set.front(), D) >= D);
    }
    CHECK(found);
    CHECK_FALSE(oracle.find_r_st(D).r_st);
    const Trace t = run(s);
    CHECK(check_agreement(t).status == VerdictStatus::kPass);
    CHECK(check_validity(t).status == VerdictStatus::kPass);
  }
}

TEST_CASE("gen_expander") {
  ExpanderConfig cfg;
  cfg.n = 64;
  cfg.root_size = 8;
  cfg.degree = 4;
  const Scenario s = gen_expander(cfg);
  CHECK(s.meta.assumption == "ASSUMPTION_2");
  const Oracle oracle(s.rounds);
  const auto root = oracle.single_root(1);
  REQUIRE(root);
  CHECK(root->size() == 8);
  for (Round r = 1; r <= s.horizon(); ++r) CHECK(oracle.single_root(r) == root);
  CHECK(sample_expansion(s, *root, 200, 9).min_ratio > 0);
  CHECK(s.D == oracle.network_causal_diameter({1, s.horizon()}));
}

TEST_CASE("random_regular_graph") {
  Rng rng(3);
  for (int n : {8, 16, 33}) {
    const auto g = random_regular_graph(rng, n, 4);
    REQUIRE(static_cast<int>(g.size()) == n);
    for (int v = 0; v < n; ++v) {
      CHECK(g[v].size() == 4);
      for (int w : g[v]) {
        CHECK(w != v);
        CHECK(std::count(g[w].begin(), g[w].end(), v) == 1);
      }
    }
  }
  CHECK_THROWS_AS(random_regular_graph(rng, 5, 3), Error);
}

TEST_CASE("classify and post_validate") {
  CHECK(classify(Oracle(gen_two_roots(1, 1, 5).rounds), 2) == "VIOLATION(multiple_roots)");
  CHECK(classify(Oracle(gen_complete_then_rings().rounds), 1) == "VIOLATION(unbounded)");
  CHECK(classify(Oracle(gen_static_line(4, 20).rounds), 3) == "ASSUMPTION_1");
  CHECK(classify(Oracle(gen_static_line(4, 5).rounds), 3) == "VIOLATION(no_window)");
  Scenario s = gen_static_line(4, 20);
  post_validate(s, Oracle(s.rounds));
  s.meta.assumption = "VIOLATION(no_window)";
  CHECK_THROWS_AS(post_validate(s, Oracle(s.rounds)), Error);
}

TEST_CASE("churn generators keep one root and no window") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ChurnConfig cfg;
    cfg.seed = seed;
    cfg.n = 3 + static_cast<int>(seed % 6);
    cfg.D = 1 + static_cast<int>(seed % (cfg.n - 1));
    const Scenario churn = gen_churn(cfg);
    const RstReport rst = Oracle(churn.rounds).find_r_st(churn.D);
    CHECK(rst.global_clauses_hold());
    CHECK_FALSE(rst.r_st);
    const Scenario rnd = gen_random_single_root(cfg);
    const Oracle oracle(rnd.rounds);
    for (Round r = 1; r <= rnd.horizon(); ++r) CHECK(oracle.roots(r).is_single());
  }
}

TEST_CASE("scenario JSON round trips") {
  StableWindowConfig sw;
  sw.n = 5;
  sw.D = 2;
  ExpanderConfig ex;
  ex.n = 16;
  ex.root_size = 2;
  for (const Scenario& s : {gen_stable_window(sw), gen_two_roots(2, 3, 7), gen_expander(ex)}) {
    const std::string text = scenario_to_json(s);
    const Scenario back = scenario_from_json(text);
    CHECK(back == s);
    CHECK(scenario_to_json(back) == text);
  }
  const auto path = std::filesystem::temp_directory_path() / "dyncon_roundtrip.json";
  const Scenario s = gen_static_star(3, 4);
  scenario_save(s, path.string());
  CHECK(scenario_load(path.string()) == s);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(scenario_load(path.string()), Error);
}

TEST_CASE("scenario parse diagnostics") {
  const auto message = [](const std::string& text) {
    try {
      scenario_from_json(text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParseError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n\"n\": 2,\n oops }").find("line 3") != std::string::npos);
  std::string text = scenario_to_json(gen_static_line(3, 4));
  const auto pos = text.find("[0,1]");
  REQUIRE(pos != std::string::npos);
  CHECK(message(text.substr(0, pos) + "[0,\"x\"]" + text.substr(pos + 5)).find("rounds[") != std::string::npos);
  CHECK(message(R"({"n":2,"D":1,"horizon":2,"inputs":[0,1],"rounds":[[[0,1]]],"meta":{}})").find("horizon") !=
        std::string::npos);
}
