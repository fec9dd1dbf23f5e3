#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace dyncon {

using ProcessId = std::int32_t;
using Round = std::int32_t;  // 1-based; round 0 does not exist
using Value = std::int64_t;
using Distance = std::int32_t;

inline constexpr Distance kInfinity = std::numeric_limits<Distance>::max();

inline bool is_finite(Distance d) { return d != kInfinity; }

/// Directed edge (from -> to): `to` receives `from`'s message.
using Edge = std::pair<ProcessId, ProcessId>;

/// Sorted, duplicate-free set of process ids.
using ProcessSet = std::vector<ProcessId>;

/// Closed round interval [first, last].
struct Interval {
  Round first = 1;
  Round last = 0;

  bool empty() const { return last < first; }
  Round length() const { return empty() ? 0 : last - first + 1; }
  bool contains(Round r) const { return first <= r && r <= last; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

}  // namespace dyncon
