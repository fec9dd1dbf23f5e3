#include "dyncon/graph_core.hpp"

#include <algorithm>
#include <string>

#include "dyncon/error.hpp"

namespace dyncon {

namespace {

std::string interval_str(Interval i) {
  return "[" + std::to_string(i.first) + "," + std::to_string(i.last) + "]";
}

}  // namespace

std::vector<ProcessSet> scc_decompose(const RoundGraph& g) {
  // Iterative Tarjan.
  const int n = g.n();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<ProcessId> stack;
  std::vector<ProcessSet> sccs;
  int next_index = 0;

  struct Frame {
    ProcessId v;
    std::size_t child;
  };
  std::vector<Frame> call;

  for (ProcessId start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    call.push_back({start, 0});
    index[start] = low[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = 1;

    while (!call.empty()) {
      Frame& f = call.back();
      auto outs = g.out_neighbors(f.v);
      if (f.child < outs.size()) {
        const ProcessId w = outs[f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const ProcessId v = f.v;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
      if (low[v] == index[v]) {
        ProcessSet comp;
        ProcessId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        sccs.push_back(std::move(comp));
      }
    }
  }
  std::sort(sccs.begin(), sccs.end(),
            [](const ProcessSet& a, const ProcessSet& b) { return a.front() < b.front(); });
  return sccs;
}

RootReport root_components(const RoundGraph& g) {
  RootReport report;
  std::vector<int> comp_of(g.n(), -1);
  auto sccs = scc_decompose(g);
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    for (ProcessId v : sccs[c]) comp_of[v] = static_cast<int>(c);
  }
  std::vector<char> has_outside_in(sccs.size(), 0);
  for (const auto& [from, to] : g.edges()) {
    if (comp_of[from] != comp_of[to]) has_outside_in[comp_of[to]] = 1;
  }
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    if (!has_outside_in[c]) report.roots.push_back(std::move(sccs[c]));
  }
  return report;
}

Distance causal_distance(const GraphSequence& seq, Round r, ProcessId p, ProcessId q) {
  if (r < 1 || r > seq.horizon()) {
    throw Error(ErrorCode::kOutOfRange, "start round " + std::to_string(r) + " outside [1," +
                                            std::to_string(seq.horizon()) + "]");
  }
  if (p < 0 || p >= seq.n() || q < 0 || q >= seq.n()) {
    throw Error(ErrorCode::kOutOfRange, "process id outside [0," + std::to_string(seq.n()) + ")");
  }
  std::vector<Distance> row(seq.n());
  causal_sweep(seq, r, p, row.data());
  return row[q];
}

Oracle::Oracle(GraphSequence seq) : seq_(std::move(seq)) {
  roots_.reserve(seq_.horizon());
  for (const auto& g : seq_.rounds()) roots_.push_back(root_components(g));
  table_ = causal_table(seq_);
  network_diam_.assign(seq_.horizon(), kInfinity);
  for (Round x = 1; x <= seq_.horizon(); ++x) {
    const auto& rr = roots_[x - 1];
    if (rr.is_single()) network_diam_[x - 1] = max_over(x, rr.roots.front(), true, {});
  }
}

const RootReport& Oracle::roots(Round r) const {
  seq_.at(r);  // range check
  return roots_[r - 1];
}

std::optional<ProcessSet> Oracle::single_root(Round r) const {
  const auto& rr = roots(r);
  if (!rr.is_single()) return std::nullopt;
  return rr.roots.front();
}

Distance Oracle::causal_distance(Round r, ProcessId p, ProcessId q) const {
  seq_.at(r);
  if (p < 0 || p >= n() || q < 0 || q >= n()) {
    throw Error(ErrorCode::kOutOfRange, "process id outside [0," + std::to_string(n()) + ")");
  }
  return table_.at(r, p, q);
}

Distance Oracle::max_over(Round x, const ProcessSet& from, bool to_all, const ProcessSet& to) const {
  Distance worst = 1;
  for (ProcessId p : from) {
    const Distance* row = table_.row(x, p);
    if (to_all) {
      for (int q = 0; q < n(); ++q) worst = std::max(worst, row[q]);
    } else {
      for (ProcessId q : to) worst = std::max(worst, row[q]);
    }
  }
  return worst;
}

Distance Oracle::component_round_diameter(Round x, const ProcessSet& members) const {
  seq_.at(x);
  return max_over(x, members, false, members);
}

Distance Oracle::network_round_diameter(Round x) const {
  if (!roots(x).is_single()) {
    throw Error(ErrorCode::kMultipleRoots, "round " + std::to_string(x) + " has " +
                                               std::to_string(roots(x).roots.size()) + " roots");
  }
  return network_diam_[x - 1];
}

Distance Oracle::network_round_diameter_or_inf(Round x) const {
  if (x < 1 || x > horizon()) return kInfinity;
  return network_diam_[x - 1];
}

Distance Oracle::interval_diameter(Interval interval, const std::vector<Distance>& per_round) {
  // Largest per-round diameter among start rounds whose propagation ends inside
  // the interval; infinite when no start round qualifies.
  bool any = false;
  Distance worst = 0;
  for (Round x = interval.first; x <= interval.last; ++x) {
    const Distance d = per_round[x - interval.first];
    if (is_finite(d) && static_cast<long long>(x) + d - 1 <= interval.last) {
      any = true;
      worst = std::max(worst, d);
    }
  }
  return any ? worst : kInfinity;
}

bool Oracle::is_scc_in_round(Round r, const ProcessSet& members) const {
  if (members.empty()) return false;
  for (const auto& comp : scc_decompose(seq_.at(r))) {
    if (std::binary_search(comp.begin(), comp.end(), members.front())) return comp == members;
  }
  return false;
}

StableIntervalReport Oracle::scc_causal_diameter(Interval interval, const ProcessSet& members) const {
  if (interval.empty() || interval.first < 1 || interval.last > horizon()) {
    throw Error(ErrorCode::kOutOfRange, "interval " + interval_str(interval) + " outside horizon");
  }
  ProcessSet sorted = members;
  std::sort(sorted.begin(), sorted.end());
  bool is_root = true;
  for (Round r = interval.first; r <= interval.last; ++r) {
    if (!is_scc_in_round(r, sorted)) {
      throw Error(ErrorCode::kNotVertexStable,
                  "members are not an SCC of round " + std::to_string(r));
    }
    const auto root = single_root(r);
    is_root = is_root && root && *root == sorted;
  }

  StableIntervalReport report;
  report.interval = interval;
  report.vertex_set = sorted;
  for (Round x = interval.first; x <= interval.last; ++x) {
    report.per_round_diameter.push_back(component_round_diameter(x, sorted));
  }
  report.interval_diameter = interval_diameter(interval, report.per_round_diameter);
  if (is_root) {
    for (Round x = interval.first; x <= interval.last; ++x) {
      report.per_round_network_diameter.push_back(network_diam_[x - 1]);
    }
    report.network_interval_diameter = interval_diameter(interval, report.per_round_network_diameter);
    for (int D = 1; D <= std::max(1, n()); ++D) {
      const Round late = interval.last - D + 1;
      if (d_bounded_from_rounds(interval, D, report.network_interval_diameter,
                                network_round_diameter_or_inf(late))) {
        report.d_bounded_for = D;
        break;
      }
    }
  }
  return report;
}

Distance Oracle::network_causal_diameter(Interval interval) const {
  if (interval.empty() || interval.first < 1 || interval.last > horizon()) {
    throw Error(ErrorCode::kOutOfRange, "interval " + interval_str(interval) + " outside horizon");
  }
  std::vector<Distance> per_round;
  for (Round x = interval.first; x <= interval.last; ++x) per_round.push_back(network_round_diameter(x));
  return interval_diameter(interval, per_round);
}

bool Oracle::d_bounded_from_rounds(Interval interval, int D, Distance interval_diam,
                                   Distance late_start_diam) const {
  if (interval.last - D + 1 < 1) return false;  // late start round does not exist
  return is_finite(interval_diam) && interval_diam <= D && late_start_diam <= D;
}

bool Oracle::check_d_bounded(Interval interval, const ProcessSet& members, int D,
                             DiameterScope scope) const {
  if (D < 1) throw Error(ErrorCode::kInvalidArgument, "D must be >= 1");
  ProcessSet sorted = members;
  std::sort(sorted.begin(), sorted.end());
  if (scope == DiameterScope::kComponent) {
    const auto report = scc_causal_diameter(interval, sorted);
    const Round late = interval.last - D + 1;
    const Distance late_diam = late >= 1 ? component_round_diameter(late, sorted) : kInfinity;
    return d_bounded_from_rounds(interval, D, report.interval_diameter, late_diam);
  }
  if (interval.empty() || interval.first < 1 || interval.last > horizon()) {
    throw Error(ErrorCode::kOutOfRange, "interval " + interval_str(interval) + " outside horizon");
  }
  for (Round r = interval.first; r <= interval.last; ++r) {
    const auto root = single_root(r);
    if (!root || *root != sorted) {
      throw Error(ErrorCode::kNotVertexStable,
                  "members are not the single root of round " + std::to_string(r));
    }
  }
  std::vector<Distance> per_round(network_diam_.begin() + (interval.first - 1),
                                  network_diam_.begin() + interval.last);
  return d_bounded_from_rounds(interval, D, interval_diameter(interval, per_round),
                               network_round_diameter_or_inf(interval.last - D + 1));
}

StabilityReport Oracle::vertex_stable_intervals() const {
  StabilityReport report;
  Round r = 1;
  while (r <= horizon()) {
    const auto root = single_root(r);
    if (!root) {
      report.multi_root_rounds.push_back(r);
      ++r;
      continue;
    }
    Round s = r;
    while (s + 1 <= horizon() && single_root(s + 1) == root) ++s;
    report.intervals.push_back(scc_causal_diameter({r, s}, *root));
    r = s + 1;
  }
  return report;
}

RstReport Oracle::find_r_st(int D) const {
  if (D < 1) throw Error(ErrorCode::kInvalidArgument, "D must be >= 1");
  RstReport report;
  const Round window = 4 * D + 2;

  Round r = 1;
  while (r <= horizon()) {
    const auto root = single_root(r);
    if (!root) {
      report.multi_root_rounds.push_back(r);
      ++r;
      continue;
    }
    Round b = r;
    while (b + 1 <= horizon() && single_root(b + 1) == root) ++b;
    const Round a = r;
    r = b + 1;

    // ends[s - a]: start rounds x whose propagation D^x completes exactly at s.
    const Round len = b - a + 1;
    std::vector<std::vector<Round>> ends(len);
    for (Round x = a; x <= b; ++x) {
      const Distance d = network_diam_[x - 1];
      if (is_finite(d) && static_cast<long long>(x) + d - 1 <= b) ends[x + d - 1 - a].push_back(x);
    }
    auto bounded = [&](Round first, Round last, Distance diam) {
      return d_bounded_from_rounds({first, last}, D, diam,
                                   network_round_diameter_or_inf(last - D + 1));
    };

    // Global clause: every sub-interval of length >= D must be D-bounded.
    bool violation_found = false;
    for (Round first = a; first <= b && !violation_found; ++first) {
      Distance diam_max = 0;
      bool any = false;
      for (Round last = first; last <= b; ++last) {
        for (Round x : ends[last - a]) {
          if (x >= first) {
            any = true;
            diam_max = std::max(diam_max, network_diam_[x - 1]);
          }
        }
        if (last - first + 1 < D) continue;
        if (!bounded(first, last, any ? diam_max : kInfinity)) {
          report.unbounded_intervals.push_back({first, last});
          violation_found = true;
          break;
        }
      }
    }

    if (!report.r_st && len >= window) {
      for (Round first = a; first + window - 1 <= b; ++first) {
        const Interval j{first, first + window - 1};
        std::vector<Distance> per_round(network_diam_.begin() + (j.first - 1),
                                        network_diam_.begin() + j.last);
        if (bounded(j.first, j.last, interval_diameter(j, per_round))) {
          report.r_st = first;
          break;
        }
      }
    }
  }
  return report;
}

std::optional<Round> Oracle::find_short_window(int D) const {
  if (D < 1) throw Error(ErrorCode::kInvalidArgument, "D must be >= 1");
  for (Round first = 1; first + D <= horizon(); ++first) {
    const auto root = single_root(first);
    if (!root) continue;
    bool stable = true;
    for (Round x = first + 1; x <= first + D && stable; ++x) stable = single_root(x) == root;
    if (!stable) continue;
    if (network_causal_diameter({first, first + D}) <= D) return first;
  }
  return std::nullopt;
}

}  // namespace dyncon
