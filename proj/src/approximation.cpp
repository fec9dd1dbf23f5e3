#include "dyncon/approximation.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "dyncon/digest.hpp"
#include "dyncon/error.hpp"

namespace dyncon {

ApproxState::ApproxState(ProcessId owner, int capacity)
    : owner_(owner), capacity_(capacity), vertices_(capacity, 0),
      labels_(static_cast<std::size_t>(capacity) * capacity * words_, 0) {
  if (capacity < 1 || owner < 0 || owner >= capacity) {
    throw Error(ErrorCode::kInvalidArgument, "owner " + std::to_string(owner) +
                                                 " outside capacity " + std::to_string(capacity));
  }
  vertices_[owner] = 1;
}

bool ApproxState::has_vertex(ProcessId v) const {
  return v >= 0 && v < capacity_ && vertices_[v];
}

ProcessSet ApproxState::vertices() const {
  ProcessSet out;
  for (ProcessId v = 0; v < capacity_; ++v) {
    if (vertices_[v]) out.push_back(v);
  }
  return out;
}

bool ApproxState::has_label(ProcessId from, ProcessId to, Round s) const {
  if (from < 0 || from >= capacity_ || to < 0 || to >= capacity_ || s < 1) return false;
  if (s >= words_ * 64) return false;
  return (labels_[block(from, to) + s / 64] >> (s % 64)) & 1U;
}

std::vector<Round> ApproxState::labels(ProcessId from, ProcessId to) const {
  std::vector<Round> out;
  if (from < 0 || from >= capacity_ || to < 0 || to >= capacity_) return out;
  const std::size_t base = block(from, to);
  for (int w = 0; w < words_; ++w) {
    std::uint64_t bits = labels_[base + w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(w * 64 + b);
      bits &= bits - 1;
    }
  }
  return out;
}

bool ApproxState::has_edge(ProcessId from, ProcessId to) const {
  if (from < 0 || from >= capacity_ || to < 0 || to >= capacity_) return false;
  const std::size_t base = block(from, to);
  for (int w = 0; w < words_; ++w) {
    if (labels_[base + w]) return true;
  }
  return false;
}

std::vector<LabeledEdge> ApproxState::edges() const {
  std::vector<LabeledEdge> out;
  for (ProcessId from = 0; from < capacity_; ++from) {
    for (ProcessId to = 0; to < capacity_; ++to) {
      if (has_edge(from, to)) out.push_back({from, to, labels(from, to)});
    }
  }
  return out;
}

std::size_t ApproxState::edge_count() const {
  std::size_t count = 0;
  for (ProcessId from = 0; from < capacity_; ++from) {
    for (ProcessId to = 0; to < capacity_; ++to) count += has_edge(from, to) ? 1 : 0;
  }
  return count;
}

void ApproxState::add_vertex(ProcessId v) {
  if (v < 0 || v >= capacity_) {
    throw Error(ErrorCode::kInvalidArgument, "vertex " + std::to_string(v) + " outside capacity");
  }
  vertices_[v] = 1;
}

void ApproxState::ensure_round_capacity(Round s) {
  if (s < words_ * 64) return;
  int words = words_;
  while (s >= words * 64) words *= 2;
  std::vector<std::uint64_t> grown(static_cast<std::size_t>(capacity_) * capacity_ * words, 0);
  const std::size_t pairs = static_cast<std::size_t>(capacity_) * capacity_;
  for (std::size_t pair = 0; pair < pairs; ++pair) {
    std::copy_n(labels_.begin() + pair * words_, words_, grown.begin() + pair * words);
  }
  labels_ = std::move(grown);
  words_ = words;
}

void ApproxState::add_label(ProcessId from, ProcessId to, Round s) {
  if (from == to || from < 0 || from >= capacity_ || to < 0 || to >= capacity_ || s < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad labeled edge " + std::to_string(from) + "->" +
                                                 std::to_string(to) + " @" + std::to_string(s));
  }
  ensure_round_capacity(s);
  labels_[block(from, to) + s / 64] |= std::uint64_t{1} << (s % 64);
}

void ApproxState::merge(const ApproxState& other) {
  if (other.capacity_ != capacity_) {
    throw Error(ErrorCode::kMalformedMessage, "snapshot capacity " + std::to_string(other.capacity_) +
                                                  " differs from " + std::to_string(capacity_));
  }
  for (ProcessId v = 0; v < capacity_; ++v) vertices_[v] |= other.vertices_[v];
  ensure_round_capacity(other.words_ * 64 - 1);
  if (other.words_ == words_) {
    for (std::size_t i = 0; i < labels_.size(); ++i) labels_[i] |= other.labels_[i];
  } else {
    const std::size_t pairs = static_cast<std::size_t>(capacity_) * capacity_;
    for (std::size_t pair = 0; pair < pairs; ++pair) {
      for (int w = 0; w < other.words_; ++w) {
        labels_[pair * words_ + w] |= other.labels_[pair * other.words_ + w];
      }
    }
  }
  if (other.pruned_before_ > pruned_before_) drop_labels_before(other.pruned_before_);
}

void ApproxState::drop_labels_before(Round keep_after) {
  if (keep_after <= 0) return;
  pruned_before_ = std::max(pruned_before_, keep_after);
  const int full_words = std::min(keep_after / 64, words_);
  const int partial_bits = keep_after % 64;
  const std::size_t pairs = static_cast<std::size_t>(capacity_) * capacity_;
  for (std::size_t pair = 0; pair < pairs; ++pair) {
    std::uint64_t* set = &labels_[pair * words_];
    std::fill(set, set + full_words, 0);
    if (full_words < words_ && partial_bits) set[full_words] &= ~std::uint64_t{0} << partial_bits;
  }
}

void ApproxState::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kMalformedMessage, "state of " + std::to_string(owner_) + ": " + why);
  };
  if (capacity_ < 1 || owner_ < 0 || owner_ >= capacity_) fail("owner outside capacity");
  if (!vertices_[owner_]) fail("owner missing from vertex set");
  for (ProcessId from = 0; from < capacity_; ++from) {
    for (ProcessId to = 0; to < capacity_; ++to) {
      if (!has_edge(from, to)) continue;
      if (from == to) fail("self-loop at " + std::to_string(from));
      if (!vertices_[from] || !vertices_[to]) {
        fail("edge " + std::to_string(from) + "->" + std::to_string(to) + " has unknown endpoint");
      }
      const auto ls = labels(from, to);
      if (ls.front() < 1) fail("round label 0");
      if (ls.front() < pruned_before_) fail("label below prune horizon");
    }
  }
}

std::string ApproxState::canonical_json() const {
  std::string out = "{\"owner\":" + std::to_string(owner_) + ",\"vertices\":[";
  bool first = true;
  for (ProcessId v : vertices()) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(v);
  }
  out += "],\"edges\":[";
  first = true;
  for (const auto& e : edges()) {
    if (!first) out += ',';
    first = false;
    out += '[' + std::to_string(e.from) + ',' + std::to_string(e.to) + ",[";
    for (std::size_t i = 0; i < e.labels.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(e.labels[i]);
    }
    out += "]]";
  }
  out += "]}";
  return out;
}

std::uint64_t ApproxState::digest() const { return fnv1a(canonical_json()); }

bool operator==(const ApproxState& a, const ApproxState& b) {
  return a.owner_ == b.owner_ && a.capacity_ == b.capacity_ && a.vertices_ == b.vertices_ &&
         a.pruned_before_ == b.pruned_before_ && a.edges() == b.edges();
}

ApproxState approx_init(ProcessId p, int capacity) { return ApproxState(p, capacity); }

ApproxMessage approx_emit(const ApproxState& state) { return {state.owner(), state}; }

ApproxState approx_absorb(ApproxState state, Round r, std::span<const ApproxMessage> received) {
  for (const auto& msg : received) {
    msg.graph.validate();
    if (msg.graph.owner() != msg.sender) {
      throw Error(ErrorCode::kMalformedMessage, "snapshot owner " + std::to_string(msg.graph.owner()) +
                                                    " differs from sender " + std::to_string(msg.sender));
    }
    if (msg.sender == state.owner()) {
      throw Error(ErrorCode::kMalformedMessage, "message from self");
    }
  }
  // Direct in-neighbors of this round, then the union of their vertex sets.
  for (const auto& msg : received) {
    state.add_label(msg.sender, state.owner(), r);
  }
  // Label union over every pair: everything a neighbor knows is merged in.
  for (const auto& msg : received) state.merge(msg.graph);
  return state;
}

ApproxSlice approx_restrict(const ApproxState& state, Round s) {
  ApproxSlice slice;
  std::vector<char> in_slice(state.capacity(), 0);
  in_slice[state.owner()] = 1;
  if (s >= 1) {
    for (ProcessId from = 0; from < state.capacity(); ++from) {
      for (ProcessId to = 0; to < state.capacity(); ++to) {
        if (state.has_label(from, to, s)) {
          slice.edges.emplace_back(from, to);
          in_slice[from] = in_slice[to] = 1;
        }
      }
    }
  }
  for (ProcessId v = 0; v < state.capacity(); ++v) {
    if (in_slice[v]) slice.vertices.push_back(v);
  }
  return slice;
}

namespace {

bool strongly_connected(const ApproxSlice& slice, ProcessId start, int capacity) {
  if (slice.vertices.size() == 1) return true;
  std::vector<std::vector<ProcessId>> fwd(capacity), bwd(capacity);
  for (const auto& [from, to] : slice.edges) {
    fwd[from].push_back(to);
    bwd[to].push_back(from);
  }
  auto reaches_all = [&](const std::vector<std::vector<ProcessId>>& adj) {
    std::vector<char> seen(capacity, 0);
    std::vector<ProcessId> stack{start};
    seen[start] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const ProcessId v = stack.back();
      stack.pop_back();
      for (ProcessId w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == slice.vertices.size();
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

}  // namespace

ProcessSet detected_component(const ApproxState& state, Round s) {
  if (s < 1 || s < state.pruned_before()) return {};
  ApproxSlice slice = approx_restrict(state, s);
  if (!strongly_connected(slice, state.owner(), state.capacity())) return {};
  return std::move(slice.vertices);
}

bool in_stable_root(const ApproxState& state, Interval interval, Round current_round) {
  if (interval.empty() || interval.first < 1 || interval.last >= current_round) return false;
  const ProcessSet reference = detected_component(state, interval.first);
  if (reference.empty()) return false;
  for (Round s = interval.first + 1; s <= interval.last; ++s) {
    if (detected_component(state, s) != reference) return false;
  }
  return true;
}

ApproxState approx_prune(ApproxState state, Round keep_after) {
  state.drop_labels_before(keep_after);
  return state;
}

}  // namespace dyncon
