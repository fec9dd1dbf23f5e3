#include "dyncon/causal_kernels.hpp"

#include <algorithm>

namespace dyncon {

void causal_sweep(const GraphSequence& seq, Round r, ProcessId p, Distance* out) {
  const int n = seq.n();
  std::fill(out, out + n, kInfinity);
  out[p] = 1;

  std::vector<char> informed(n, 0);
  std::vector<ProcessId> reached;
  reached.reserve(n);
  informed[p] = 1;
  reached.push_back(p);

  // After k rounds (r .. r+k-1) the informed set holds every q with cd_r(p,q) <= k.
  for (Distance k = 1; r + k - 1 <= seq.horizon() && static_cast<int>(reached.size()) < n; ++k) {
    const RoundGraph& g = seq.at(r + k - 1);
    const std::size_t before = reached.size();
    for (std::size_t i = 0; i < before; ++i) {
      for (ProcessId w : g.out_neighbors(reached[i])) {
        if (!informed[w]) {
          informed[w] = 1;
          out[w] = k;
          reached.push_back(w);
        }
      }
    }
  }
}

CausalTable causal_table_serial(const GraphSequence& seq) {
  CausalTable table(seq.n(), seq.horizon());
  for (Round r = 1; r <= seq.horizon(); ++r) {
    for (ProcessId p = 0; p < seq.n(); ++p) {
      causal_sweep(seq, r, p, table.row(r, p));
    }
  }
  return table;
}

CausalTable causal_table(const GraphSequence& seq) {
  CausalTable table(seq.n(), seq.horizon());
  const long long n = seq.n();
  const long long jobs = static_cast<long long>(seq.horizon()) * n;

#pragma omp parallel for schedule(dynamic, 4)
  for (long long job = 0; job < jobs; ++job) {
    const Round r = static_cast<Round>(job / n) + 1;
    const auto p = static_cast<ProcessId>(job % n);
    causal_sweep(seq, r, p, table.row(r, p));
  }
  return table;
}

CausalTable causal_table_rows(const GraphSequence& seq, const std::vector<ProcessSet>& sources) {
  CausalTable table(seq.n(), seq.horizon());
  std::vector<std::pair<Round, ProcessId>> jobs;
  for (Round r = 1; r <= seq.horizon() && r <= static_cast<Round>(sources.size()); ++r) {
    for (ProcessId p : sources[r - 1]) jobs.emplace_back(r, p);
  }
  const auto count = static_cast<long long>(jobs.size());

#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < count; ++i) {
    causal_sweep(seq, jobs[i].first, jobs[i].second, table.row(jobs[i].first, jobs[i].second));
  }
  return table;
}

}  // namespace dyncon
