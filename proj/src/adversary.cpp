#include "dyncon/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dyncon/error.hpp"

namespace dyncon {

namespace {

[[noreturn]] void infeasible(const std::string& why) { throw Error(ErrorCode::kInfeasible, why); }

std::vector<Value> distinct_inputs(Rng& rng, int n) {
  std::vector<Value> inputs(n);
  std::iota(inputs.begin(), inputs.end(), Value{0});
  rng.shuffle(std::span<Value>(inputs));
  return inputs;
}

std::vector<Value> identity_inputs(int n) {
  std::vector<Value> inputs(n);
  std::iota(inputs.begin(), inputs.end(), Value{0});
  return inputs;
}

Scenario make(int n, int D, std::vector<Value> inputs, std::vector<RoundGraph> rounds,
              std::string generator, std::uint64_t seed) {
  Scenario s;
  s.n = n;
  s.D = D;
  s.inputs = std::move(inputs);
  s.rounds = GraphSequence(n, std::move(rounds));
  s.meta.generator = std::move(generator);
  s.meta.seed = seed;
  validate(s);
  return s;
}

// Tags with the oracle's verdict and fills claimed_r_st.
void tag_from_oracle(Scenario& s, const Oracle& oracle) {
  s.meta.assumption = classify(oracle, s.D);
  s.meta.claimed_r_st = oracle.find_r_st(s.D).r_st;
}

int max_root_size(int n, int D) { return D >= n - 1 ? n : std::min(D, n - 1); }

}  // namespace

std::string classify(const Oracle& oracle, int D) {
  const RstReport report = oracle.find_r_st(D);
  if (!report.multi_root_rounds.empty()) return "VIOLATION(multiple_roots)";
  if (!report.unbounded_intervals.empty()) return "VIOLATION(unbounded)";
  if (!report.r_st) return "VIOLATION(no_window)";
  return "ASSUMPTION_1";
}

void post_validate(const Scenario& s, const Oracle& oracle) {
  const std::string& tag = s.meta.assumption;
  auto refuted = [&](const std::string& why) {
    infeasible("oracle refutes tag " + tag + " of " + s.meta.generator + ": " + why);
  };
  if (tag == "ASSUMPTION_2") {
    const auto first = oracle.single_root(1);
    if (!first) refuted("round 1 has several roots");
    for (Round r = 2; r <= oracle.horizon(); ++r) {
      if (oracle.single_root(r) != first) refuted("root changes in round " + std::to_string(r));
    }
    return;
  }
  if (tag == "VIOLATION(two_roots)") {
    for (Round r = 1; r <= oracle.horizon(); ++r) {
      if (oracle.roots(r).roots.size() < 2) refuted("round " + std::to_string(r) + " has one root");
    }
    return;
  }
  if (tag == "VIOLATION(short_window)") {
    const RstReport report = oracle.find_r_st(s.D);
    if (report.r_st) refuted("a full stability window exists");
    if (!report.global_clauses_hold()) refuted("global clauses fail");
    return;
  }
  const std::string actual = classify(oracle, s.D);
  if (actual != tag) refuted("oracle says " + actual);
}

ProcessSet random_root(Rng& rng, int n, int D, const std::optional<ProcessSet>& avoid_a,
                       const std::optional<ProcessSet>& avoid_b) {
  std::vector<ProcessId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  const int kmax = max_root_size(n, D);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int k = rng.between(1, kmax);
    rng.shuffle(std::span<ProcessId>(ids));
    ProcessSet root(ids.begin(), ids.begin() + k);
    std::sort(root.begin(), root.end());
    if (root != avoid_a && root != avoid_b) return root;
  }
  infeasible("no root set differs from its neighbors (n=" + std::to_string(n) + ")");
}

std::vector<int> random_levels(Rng& rng, int n, int D, const ProcessSet& root) {
  std::vector<int> level(n, 0);
  std::vector<ProcessId> others;
  for (ProcessId p = 0; p < n; ++p) {
    if (!std::binary_search(root.begin(), root.end(), p)) others.push_back(p);
  }
  if (others.empty()) return level;
  const int depth_cap = D - (static_cast<int>(root.size()) - 1);
  if (depth_cap < 1) infeasible("root of size " + std::to_string(root.size()) + " too large for D");
  const int depth = rng.between(1, std::min<int>(depth_cap, static_cast<int>(others.size())));
  rng.shuffle(std::span<ProcessId>(others));
  for (std::size_t i = 0; i < others.size(); ++i) {
    level[others[i]] = i < static_cast<std::size_t>(depth) ? static_cast<int>(i) + 1 : rng.between(1, depth);
  }
  return level;
}

RoundGraph layered_round(Rng& rng, int n, const ProcessSet& root, const std::vector<int>& level) {
  std::vector<Edge> edges;
  const int k = static_cast<int>(root.size());
  if (k >= 2) {
    ProcessSet order = root;
    rng.shuffle(std::span<ProcessId>(order));
    for (int i = 0; i < k; ++i) edges.emplace_back(order[i], order[(i + 1) % k]);
    for (ProcessId a : root) {
      for (ProcessId b : root) {
        if (a != b && rng.chance(1, 4)) edges.emplace_back(a, b);
      }
    }
  }
  const int depth = *std::max_element(level.begin(), level.end());
  std::vector<std::vector<ProcessId>> by_level(depth + 1);
  for (ProcessId p = 0; p < n; ++p) by_level[level[p]].push_back(p);
  for (int j = 1; j <= depth; ++j) {
    const auto& parents = by_level[j - 1];
    for (ProcessId w : by_level[j]) {
      edges.emplace_back(parents[rng.below(parents.size())], w);
      // Extra in-edges only shorten distances and never point into the root.
      if (rng.chance(1, 3)) {
        const auto v = static_cast<ProcessId>(rng.below(n));
        if (v != w) edges.emplace_back(v, w);
      }
    }
  }
  return RoundGraph(n, std::move(edges));
}

Scenario gen_stable_window(const StableWindowConfig& cfg) {
  const int n = cfg.n;
  const int D = cfg.D;
  if (n < 1 || D < 1) infeasible("need n >= 1 and D >= 1");
  if (n > 1 && D > n - 1) infeasible("D=" + std::to_string(D) + " exceeds n-1=" + std::to_string(n - 1));
  if (n == 1 && D != 1) infeasible("a single process needs D=1");
  const Round window = cfg.window_len == 0 ? 4 * D + 2 : cfg.window_len;
  if (window < 4 * D + 2) infeasible("window shorter than 4D+2");
  if (cfg.r_st < 1) infeasible("r_st must be >= 1");
  const Round last = cfg.r_st + window - 1;
  const Round horizon = cfg.horizon == 0 ? last + 2 : cfg.horizon;
  if (horizon < last) infeasible("window ends after the horizon");

  Rng rng(mix_seed(cfg.seed, 1));
  const ProcessSet window_root = random_root(rng, n, D, std::nullopt, std::nullopt);
  const std::vector<int> window_levels = random_levels(rng, n, D, window_root);

  std::vector<RoundGraph> rounds;
  std::optional<ProcessSet> prev;
  for (Round r = 1; r <= horizon; ++r) {
    if (r >= cfg.r_st && r <= last) {
      rounds.push_back(layered_round(rng, n, window_root, window_levels));
      prev = window_root;
      continue;
    }
    std::optional<ProcessSet> next;
    if (r == cfg.r_st - 1) next = window_root;
    const ProcessSet root = n == 1 ? ProcessSet{0} : random_root(rng, n, D, prev, next);
    rounds.push_back(layered_round(rng, n, root, random_levels(rng, n, D, root)));
    prev = root;
  }

  Scenario s = make(n, D, distinct_inputs(rng, n), std::move(rounds), "stable_window", cfg.seed);
  const Oracle oracle(s.rounds);
  const RstReport report = oracle.find_r_st(D);
  if (!report.assumption_holds() || *report.r_st > cfg.r_st) {
    infeasible("generated sequence fails its own stability check");
  }
  s.meta.assumption = "ASSUMPTION_1";
  s.meta.claimed_r_st = report.r_st;
  post_validate(s, oracle);
  return s;
}

Scenario gen_churn(const ChurnConfig& cfg) {
  const int n = cfg.n;
  const int D = cfg.D;
  if (n < 2 || D < 1 || D > n - 1) infeasible("need n >= 2 and 1 <= D <= n-1");
  if (cfg.horizon < 1) infeasible("horizon must be >= 1");
  Rng rng(mix_seed(cfg.seed, 2));
  std::vector<RoundGraph> rounds;
  std::optional<ProcessSet> prev;
  while (static_cast<Round>(rounds.size()) < cfg.horizon) {
    const Round len = rng.between(1, 4 * D + 1);
    const ProcessSet root = random_root(rng, n, D, prev, std::nullopt);
    const std::vector<int> levels = random_levels(rng, n, D, root);
    for (Round i = 0; i < len && static_cast<Round>(rounds.size()) < cfg.horizon; ++i) {
      rounds.push_back(layered_round(rng, n, root, levels));
    }
    prev = root;
  }
  Scenario s = make(n, D, distinct_inputs(rng, n), std::move(rounds), "churn", cfg.seed);
  const Oracle oracle(s.rounds);
  tag_from_oracle(s, oracle);
  if (s.meta.assumption != "VIOLATION(no_window)") {
    infeasible("churn sequence classified as " + s.meta.assumption);
  }
  return s;
}

Scenario gen_random_single_root(const ChurnConfig& cfg) {
  const int n = cfg.n;
  if (n < 2 || cfg.horizon < 1) infeasible("need n >= 2 and horizon >= 1");
  Rng rng(mix_seed(cfg.seed, 3));
  const int D = rng.between(1, n - 1);
  std::vector<RoundGraph> rounds;
  for (Round r = 1; r <= cfg.horizon; ++r) {
    std::vector<Edge> edges;
    for (ProcessId a = 0; a < n; ++a) {
      for (ProcessId b = 0; b < n; ++b) {
        if (a != b && rng.chance(2, n)) edges.emplace_back(a, b);
      }
    }
    RoundGraph g(n, edges);
    const auto roots = root_components(g).roots;
    if (roots.size() > 1) {
      const auto& keep = roots[rng.below(roots.size())];
      for (const auto& other : roots) {
        if (other == keep) continue;
        edges.emplace_back(keep[rng.below(keep.size())], other[rng.below(other.size())]);
      }
      g = RoundGraph(n, std::move(edges));
    }
    rounds.push_back(std::move(g));
  }
  Scenario s = make(n, D, distinct_inputs(rng, n), std::move(rounds), "random_single_root", cfg.seed);
  const Oracle oracle(s.rounds);
  tag_from_oracle(s, oracle);
  if (!oracle.find_r_st(D).multi_root_rounds.empty()) infeasible("root repair failed");
  return s;
}

namespace {

Scenario tagged(Scenario s) {
  const Oracle oracle(s.rounds);
  tag_from_oracle(s, oracle);
  return s;
}

std::vector<Edge> line_edges(int n, bool reversed) {
  std::vector<Edge> edges;
  for (ProcessId i = 0; i + 1 < n; ++i) {
    edges.push_back(reversed ? Edge{i + 1, i} : Edge{i, i + 1});
  }
  return edges;
}

}  // namespace

Scenario gen_static_line(int n, Round horizon) {
  if (n < 2 || horizon < 1) infeasible("need n >= 2 and horizon >= 1");
  std::vector<RoundGraph> rounds(horizon, RoundGraph(n, line_edges(n, false)));
  return tagged(make(n, n - 1, identity_inputs(n), std::move(rounds), "static_line", 0));
}

Scenario gen_static_star(int n, Round horizon) {
  if (n < 2 || horizon < 1) infeasible("need n >= 2 and horizon >= 1");
  std::vector<Edge> edges;
  for (ProcessId leaf = 1; leaf < n; ++leaf) edges.emplace_back(0, leaf);
  std::vector<RoundGraph> rounds(horizon, RoundGraph(n, edges));
  return tagged(make(n, n - 1, identity_inputs(n), std::move(rounds), "static_star", 0));
}

Scenario gen_reversing_line(int n, Round kappa, Round horizon) {
  if (n < 2 || horizon < 1 || kappa < 0) infeasible("need n >= 2, horizon >= 1, kappa >= 0");
  std::vector<RoundGraph> rounds;
  for (Round r = 1; r <= horizon; ++r) rounds.emplace_back(n, line_edges(n, r > kappa));
  return tagged(make(n, n - 1, identity_inputs(n), std::move(rounds), "reversing_line", 0));
}

Scenario gen_two_roots(int n0, int n1, Round horizon) {
  if (n0 < 1 || n1 < 1 || horizon < 1) infeasible("need n0, n1 >= 1 and horizon >= 1");
  const int n = n0 + n1 + 1;
  const ProcessId sink = n0 + n1;
  std::vector<Edge> edges;
  auto ring = [&](ProcessId first, int size) {
    for (int i = 0; size >= 2 && i < size; ++i) edges.emplace_back(first + i, first + (i + 1) % size);
  };
  ring(0, n0);
  ring(n0, n1);
  edges.emplace_back(0, sink);
  edges.emplace_back(n0, sink);
  std::vector<Value> inputs(n, 0);
  for (ProcessId p = n0; p < n0 + n1; ++p) inputs[p] = 1;
  std::vector<RoundGraph> rounds(horizon, RoundGraph(n, edges));
  Scenario s = make(n, n - 1, std::move(inputs), std::move(rounds), "two_roots", 0);
  s.meta.assumption = "VIOLATION(two_roots)";
  post_validate(s, Oracle(s.rounds));
  return s;
}

Scenario gen_complete_then_rings(Round horizon) {
  if (horizon < 1) infeasible("horizon must be >= 1");
  const int n = 4;
  std::vector<Edge> complete;
  for (ProcessId a = 0; a < n; ++a) {
    for (ProcessId b = 0; b < n; ++b) {
      if (a != b) complete.emplace_back(a, b);
    }
  }
  const std::vector<Edge> ring{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  std::vector<RoundGraph> rounds;
  for (Round r = 1; r <= horizon; ++r) rounds.emplace_back(n, r == 1 ? complete : ring);
  return tagged(make(n, 1, identity_inputs(n), std::move(rounds), "complete_then_rings", 0));
}

Scenario gen_short_window(const ShortWindowConfig& cfg) {
  const int n = cfg.n;
  const int D = cfg.D;
  if (D < 1 || n < D + 1 || n < 2) infeasible("need D >= 1 and n >= D+1");
  if (cfg.extend < 0 || D + cfg.extend >= 4 * D + 2) infeasible("extend must keep the window below 4D+2");
  const Round first = cfg.window_start;
  const Round last = first + D + cfg.extend - 1;
  if (first < 1 || last > cfg.horizon) infeasible("window does not fit in the horizon");

  // Line 0 -> 1 -> ... -> D with the remaining processes hanging off `head`;
  // with head 1 the first hop is reversed (1 -> 0), making {1} the root.
  auto layout = [&](ProcessId head) {
    std::vector<Edge> edges;
    edges.push_back(head == 0 ? Edge{0, 1} : Edge{1, 0});
    for (ProcessId i = 1; i < D; ++i) edges.emplace_back(i, i + 1);
    for (ProcessId extra = D + 1; extra < n; ++extra) edges.emplace_back(head, extra);
    return RoundGraph(n, std::move(edges));
  };
  const RoundGraph window = layout(0);
  const RoundGraph other = layout(1);
  std::vector<RoundGraph> rounds;
  for (Round r = 1; r <= cfg.horizon; ++r) {
    if (r >= first && r <= last) {
      rounds.push_back(window);
    } else {
      // Rounds next to the window use the other root; farther ones alternate.
      const Round gap = r < first ? first - r : r - last;
      rounds.push_back(gap % 2 == 1 ? other : window);
    }
  }
  Scenario s = make(n, D, identity_inputs(n), std::move(rounds), "short_window", 0);
  s.meta.assumption = "VIOLATION(short_window)";
  const Oracle oracle(s.rounds);
  post_validate(s, oracle);
  for (Round r = first; r <= last; ++r) {
    if (oracle.causal_distance(r, 0, D) < D) infeasible("far process got closer than D");
  }
  return s;
}

std::vector<std::vector<int>> random_regular_graph(Rng& rng, int n, int degree) {
  if (degree < 0 || degree >= n || (static_cast<long long>(n) * degree) % 2 != 0) {
    infeasible("no simple " + std::to_string(degree) + "-regular graph on " + std::to_string(n) + " vertices");
  }
  // Pairing with incremental rejection of loops and repeated pairs; restart
  // when the remaining points admit no valid pair.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<std::set<int>> adj(n);
    std::vector<int> points;
    for (int v = 0; v < n; ++v) points.insert(points.end(), degree, v);
    bool stuck = false;
    while (!points.empty() && !stuck) {
      stuck = true;
      for (int tries = 0; tries < 50 * static_cast<int>(points.size()); ++tries) {
        auto i = static_cast<std::size_t>(rng.below(points.size()));
        auto j = static_cast<std::size_t>(rng.below(points.size()));
        const int u = points[i];
        const int v = points[j];
        if (i == j || u == v || adj[u].count(v)) continue;
        adj[u].insert(v);
        adj[v].insert(u);
        if (i < j) std::swap(i, j);
        points[i] = points.back();
        points.pop_back();
        points[j] = points.back();
        points.pop_back();
        stuck = false;
        break;
      }
    }
    if (stuck) continue;
    std::vector<std::vector<int>> out(n);
    for (int v = 0; v < n; ++v) out[v].assign(adj[v].begin(), adj[v].end());
    return out;
  }
  infeasible("random regular graph construction did not converge");
}

Scenario gen_expander(const ExpanderConfig& cfg) {
  const int n = cfg.n;
  const int k = cfg.root_size;
  if (cfg.degree < 3) infeasible("degree must be >= 3");
  if (k < 1 || k > n || cfg.degree >= n) infeasible("need 1 <= |R| <= n and degree < n");
  const Round horizon =
      cfg.horizon > 0 ? cfg.horizon : 4 * static_cast<Round>(std::ceil(std::log2(std::max(2, n)))) + 8;

  Rng rng(mix_seed(cfg.seed, 4));
  std::vector<ProcessId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  rng.shuffle(std::span<ProcessId>(ids));
  ProcessSet root(ids.begin(), ids.begin() + k);
  std::sort(root.begin(), root.end());
  std::vector<char> in_root(n, 0);
  for (ProcessId p : root) in_root[p] = 1;

  auto build = [&]() {
    for (int attempt = 0; attempt < 50; ++attempt) {
      std::vector<Edge> edges;
      auto add_undirected = [&](ProcessId a, ProcessId b) {
        edges.emplace_back(a, b);
        edges.emplace_back(b, a);
      };
      if (k >= 2) {
        if (cfg.degree < k && (k * cfg.degree) % 2 == 0) {
          const auto local = random_regular_graph(rng, k, cfg.degree);
          for (int a = 0; a < k; ++a) {
            for (int b : local[a]) {
              if (a < b) add_undirected(root[a], root[b]);
            }
          }
        } else {
          for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) add_undirected(root[a], root[b]);
          }
        }
      }
      const auto global = random_regular_graph(rng, n, cfg.degree);
      for (int a = 0; a < n; ++a) {
        for (int b : global[a]) {
          if (a < b) add_undirected(a, b);
        }
      }
      std::erase_if(edges, [&](const Edge& e) { return !in_root[e.first] && in_root[e.second]; });
      RoundGraph g(n, std::move(edges));
      const RootReport report = root_components(g);
      if (report.is_single() && report.roots.front() == root) return g;
    }
    infeasible("could not build an expander round with root R");
  };

  std::vector<RoundGraph> rounds;
  rounds.push_back(build());
  for (Round r = 2; r <= horizon; ++r) rounds.push_back(cfg.reshuffle ? build() : rounds.front());

  Scenario s = make(n, 1, distinct_inputs(rng, n), std::move(rounds), "expander", cfg.seed);
  const Oracle oracle(s.rounds);
  const Distance measured = oracle.network_causal_diameter({1, horizon});
  if (!is_finite(measured)) infeasible("network causal diameter not reached within the horizon");
  s.D = measured;
  s.meta.assumption = "ASSUMPTION_2";
  s.meta.claimed_r_st = oracle.find_r_st(s.D).r_st;
  post_validate(s, oracle);
  const ExpansionSample sample = sample_expansion(s, root, 200, cfg.seed);
  if (!(sample.min_ratio > 0)) infeasible("sampled expansion is zero");
  return s;
}

ExpansionSample sample_expansion(const Scenario& s, const ProcessSet& root, int samples,
                                 std::uint64_t seed) {
  ExpansionSample out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  const int n = s.n;
  const int k = static_cast<int>(root.size());
  if (k > n / 2) return out;  // no admissible S
  Rng rng(mix_seed(seed, 5));
  std::vector<ProcessId> others;
  for (ProcessId p = 0; p < n; ++p) {
    if (!std::binary_search(root.begin(), root.end(), p)) others.push_back(p);
  }
  std::vector<char> in_s(n), in_n(n);
  for (Round r = 1; r <= s.horizon(); ++r) {
    const RoundGraph& g = s.rounds.at(r);
    for (int i = 0; i < samples; ++i) {
      const int size = rng.between(k, n / 2);
      rng.shuffle(std::span<ProcessId>(others));
      std::fill(in_s.begin(), in_s.end(), 0);
      std::fill(in_n.begin(), in_n.end(), 0);
      std::vector<ProcessId> members = root;
      members.insert(members.end(), others.begin(), others.begin() + (size - k));
      for (ProcessId p : members) in_s[p] = 1;
      int boundary = 0;
      for (ProcessId p : members) {
        for (ProcessId q : g.out_neighbors(p)) {
          if (!in_s[q] && !in_n[q]) {
            in_n[q] = 1;
            ++boundary;
          }
        }
      }
      out.min_ratio = std::min(out.min_ratio, static_cast<double>(boundary) / size);
      ++out.samples;
    }
  }
  return out;
}

}  // namespace dyncon
