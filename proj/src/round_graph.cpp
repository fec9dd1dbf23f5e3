#include "dyncon/round_graph.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "dyncon/error.hpp"

namespace dyncon {

RoundGraph::RoundGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative process count");
  for (const auto& [from, to] : edges_) {
    if (from < 0 || from >= n || to < 0 || to >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge " + std::to_string(from) + "->" + std::to_string(to) +
                      " has an endpoint outside [0," + std::to_string(n) + ")");
    }
    if (from == to) {
      throw Error(ErrorCode::kInvalidArgument, "self-loop at " + std::to_string(from));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const auto& [from, to] : edges_) {
    ++out_offsets_[from + 1];
    ++in_offsets_[to + 1];
  }
  for (int v = 0; v < n; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  out_targets_.resize(edges_.size());
  in_sources_.resize(edges_.size());
  std::vector<int> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<int> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // edges_ is sorted by (from, to), so both lists come out sorted.
  for (const auto& [from, to] : edges_) {
    out_targets_[out_fill[from]++] = to;
  }
  std::vector<Edge> by_target = edges_;
  std::sort(by_target.begin(), by_target.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
  for (const auto& [from, to] : by_target) {
    in_sources_[in_fill[to]++] = from;
  }
}

std::span<const ProcessId> RoundGraph::in_neighbors(ProcessId q) const {
  return {in_sources_.data() + in_offsets_[q],
          static_cast<std::size_t>(in_offsets_[q + 1] - in_offsets_[q])};
}

std::span<const ProcessId> RoundGraph::out_neighbors(ProcessId p) const {
  return {out_targets_.data() + out_offsets_[p],
          static_cast<std::size_t>(out_offsets_[p + 1] - out_offsets_[p])};
}

bool RoundGraph::has_edge(ProcessId from, ProcessId to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) return false;
  auto outs = out_neighbors(from);
  return std::binary_search(outs.begin(), outs.end(), to);
}

GraphSequence::GraphSequence(int n, std::vector<RoundGraph> rounds)
    : n_(n), rounds_(std::move(rounds)) {
  for (std::size_t i = 0; i < rounds_.size(); ++i) {
    if (rounds_[i].n() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "round " + std::to_string(i + 1) + " has " + std::to_string(rounds_[i].n()) +
                      " processes, expected " + std::to_string(n));
    }
  }
}

const RoundGraph& GraphSequence::at(Round r) const {
  if (r < 1 || r > horizon()) {
    throw Error(ErrorCode::kOutOfRange,
                "round " + std::to_string(r) + " outside [1," + std::to_string(horizon()) + "]");
  }
  return rounds_[r - 1];
}

GraphSequence GraphSequence::prefix(Round horizon) const {
  const auto keep = static_cast<std::size_t>(std::clamp<Round>(horizon, 0, this->horizon()));
  return GraphSequence(n_, std::vector<RoundGraph>(rounds_.begin(), rounds_.begin() + keep));
}

}  // namespace dyncon
