#include "dyncon/batch.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>
#include <omp.h>

#include "dyncon/adversary.hpp"
#include "dyncon/error.hpp"
#include "dyncon/harness.hpp"
#include "dyncon/rng.hpp"

namespace dyncon {

using nlohmann::json;

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names{
      "stable_window", "churn",     "random_single_root",  "static_line", "static_star",
      "reversing_line", "two_roots", "complete_then_rings", "short_window", "expander"};
  return names;
}

Scenario generate(const GenRequest& q) {
  auto or_default = [](auto value, auto fallback) { return value > 0 ? value : fallback; };
  Scenario s;
  if (q.gen == "stable_window") {
    StableWindowConfig cfg;
    cfg.seed = q.seed;
    cfg.n = or_default(q.n, 4);
    cfg.D = or_default(q.D, std::max(1, cfg.n - 1));
    cfg.r_st = or_default(q.r_st, 1);
    cfg.window_len = q.window;
    cfg.horizon = q.horizon;
    s = gen_stable_window(cfg);
  } else if (q.gen == "churn" || q.gen == "random_single_root") {
    ChurnConfig cfg;
    cfg.seed = q.seed;
    cfg.n = or_default(q.n, 4);
    cfg.D = or_default(q.D, std::max(1, cfg.n - 1));
    cfg.horizon = or_default(q.horizon, 40);
    s = q.gen == "churn" ? gen_churn(cfg) : gen_random_single_root(cfg);
  } else if (q.gen == "static_line") {
    s = gen_static_line(or_default(q.n, 5), or_default(q.horizon, 20));
  } else if (q.gen == "static_star") {
    s = gen_static_star(or_default(q.n, 4), or_default(q.horizon, 20));
  } else if (q.gen == "reversing_line") {
    const Round horizon = or_default(q.horizon, 20);
    s = gen_reversing_line(or_default(q.n, 5), q.kappa >= 0 ? q.kappa : horizon / 2, horizon);
  } else if (q.gen == "two_roots") {
    int n0 = q.n0;
    int n1 = q.n1;
    if (n0 == 0 && n1 == 0 && q.n > 0) {
      n0 = (q.n - 1) / 2;
      n1 = q.n - 1 - n0;
    }
    s = gen_two_roots(or_default(n0, 2), or_default(n1, 2), or_default(q.horizon, 60));
  } else if (q.gen == "complete_then_rings") {
    s = gen_complete_then_rings(or_default(q.horizon, 3));
  } else if (q.gen == "short_window") {
    ShortWindowConfig cfg;
    cfg.D = or_default(q.D, 2);
    cfg.n = or_default(q.n, cfg.D + 2);
    cfg.window_start = or_default(q.window_start, 4);
    cfg.horizon = or_default(q.horizon, 30);
    cfg.extend = q.extend;
    s = gen_short_window(cfg);
  } else if (q.gen == "expander") {
    ExpanderConfig cfg;
    cfg.seed = q.seed;
    cfg.n = or_default(q.n, 64);
    cfg.root_size = or_default(q.root_size, std::max(1, cfg.n / 8));
    cfg.degree = q.degree;
    cfg.reshuffle = q.reshuffle;
    cfg.horizon = q.horizon;
    s = gen_expander(cfg);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown generator '" + q.gen + "'");
  }
  if (q.unlock_resets_lock_round) s.meta.unlock_resets_lock_round = true;
  return s;
}

Scenario batch_scenario(const BatchConfig& config, std::uint64_t seed, std::optional<int> fixed_n) {
  Rng rng(mix_seed(seed, 77));
  GenRequest q;
  q.gen = config.gen;
  q.seed = seed;
  q.n = fixed_n ? *fixed_n : rng.between(config.n_min, config.n_max);
  const int d_hi = std::max(1, config.d_max > 0 ? std::min(config.d_max, q.n - 1) : q.n - 1);
  const int d_lo = std::clamp(config.d_min, 1, d_hi);
  q.D = rng.between(d_lo, d_hi);
  q.horizon = config.horizon;
  if (config.gen == "stable_window") {
    q.r_st = rng.between(1, 8);
    q.window = 4 * q.D + 2 + rng.between(0, 2 * q.D);
    const Round needed = q.r_st + q.window + 1;
    q.horizon = std::max(config.horizon, needed);
  } else if (config.gen == "churn" || config.gen == "random_single_root") {
    if (q.horizon == 0) q.horizon = 6 * q.D + 10;
  } else if (config.gen == "short_window") {
    q.window_start = rng.between(1, 6);
    if (q.horizon == 0) q.horizon = q.window_start + 4 * q.D + 6;
  }
  return generate(q);
}

BatchRow evaluate(const Scenario& scenario, const BatchConfig& config) {
  BatchRow row;
  row.seed = scenario.meta.seed;
  row.generator = scenario.meta.generator;
  row.n = scenario.n;
  row.D = scenario.D;
  row.assumption = scenario.meta.assumption;
  row.horizon = scenario.horizon();

  const Oracle oracle(scenario.rounds);
  const RstReport rst = oracle.find_r_st(scenario.D);
  row.r_st = rst.r_st;
  if (rst.r_st) row.bound = *rst.r_st + 4 * scenario.D + 1;
  if (rst.multi_root_rounds.empty()) {
    const Distance d = oracle.network_causal_diameter({1, scenario.horizon()});
    if (is_finite(d)) row.diameter = d;
  }
  if (config.oracle_only) return row;

  const Trace trace = run(scenario, {config.prune, std::nullopt, false});
  for (const auto& d : trace.decisions) {
    if (!d) continue;
    ++row.decided;
    row.first_decision = row.first_decision ? std::min(*row.first_decision, d->round) : d->round;
    row.last_decision = row.last_decision ? std::max(*row.last_decision, d->round) : d->round;
  }
  row.verdicts = check_all(trace, scenario, oracle, config.checks);
  return row;
}

std::vector<BatchRow> run_batch(const BatchConfig& config) {
  std::vector<std::pair<std::uint64_t, std::optional<int>>> jobs;
  std::vector<std::uint64_t> seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  for (auto seed : seeds) {
    if (config.n_values.empty()) {
      jobs.emplace_back(seed, std::nullopt);
    } else {
      for (int n : config.n_values) jobs.emplace_back(seed, n);
    }
  }
  std::vector<BatchRow> rows(jobs.size());
  const long long count = static_cast<long long>(jobs.size());
  const int threads = config.threads;

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (long long i = 0; i < count; ++i) {
    const auto [seed, n] = jobs[i];
    try {
      rows[i] = evaluate(batch_scenario(config, seed, n), config);
    } catch (const std::exception& e) {
      rows[i].seed = seed;
      rows[i].generator = config.gen;
      rows[i].n = n.value_or(0);
      rows[i].error = e.what();
    }
  }
  return rows;
}

namespace {

const std::vector<std::string>& verdict_columns() {
  static const std::vector<std::string> cols{"AGREEMENT", "VALIDITY", "TERMINATION", "APPROX_INVARIANTS",
                                             "LOCK_DISCIPLINE"};
  return cols;
}

template <typename T>
std::string opt_str(const std::optional<T>& v) {
  return v ? std::to_string(*v) : "";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> json_opt(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace

std::string batch_csv(const std::vector<BatchRow>& rows) {
  std::string out = "seed,generator,n,D,assumption,r_ST,first_decision,last_decision,bound,horizon,decided,diameter";
  for (const auto& c : verdict_columns()) out += "," + c;
  out += ",error\n";
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + "," + csv_escape(r.generator) + "," + std::to_string(r.n) + "," +
           std::to_string(r.D) + "," + csv_escape(r.assumption) + "," + opt_str(r.r_st) + "," +
           opt_str(r.first_decision) + "," + opt_str(r.last_decision) + "," + opt_str(r.bound) + "," +
           std::to_string(r.horizon) + "," + std::to_string(r.decided) + "," + opt_str(r.diameter);
    for (const auto& c : verdict_columns()) {
      auto it = std::find_if(r.verdicts.begin(), r.verdicts.end(), [&](const auto& v) { return v.name == c; });
      out += "," + (it == r.verdicts.end() ? std::string() : std::string(to_string(it->status)));
    }
    out += "," + csv_escape(r.error) + "\n";
  }
  return out;
}

std::string batch_json(const std::vector<BatchRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"seed", r.seed},
                   {"generator", r.generator},
                   {"n", r.n},
                   {"D", r.D},
                   {"assumption", r.assumption},
                   {"r_st", opt_json(r.r_st)},
                   {"first_decision", opt_json(r.first_decision)},
                   {"last_decision", opt_json(r.last_decision)},
                   {"bound", opt_json(r.bound)},
                   {"horizon", r.horizon},
                   {"decided", r.decided},
                   {"diameter", opt_json(r.diameter)},
                   {"verdicts", json::parse(verdicts_to_json(r.verdicts))},
                   {"error", r.error}});
  }
  return json{{"rows", std::move(arr)}}.dump(1) + "\n";
}

std::vector<BatchRow> batch_from_json(const std::string& text) {
  std::vector<BatchRow> rows;
  try {
    const json j = json::parse(text);
    for (const auto& r : j.at("rows")) {
      BatchRow row;
      row.seed = r.at("seed").get<std::uint64_t>();
      row.generator = r.at("generator").get<std::string>();
      row.n = r.at("n").get<int>();
      row.D = r.at("D").get<int>();
      row.assumption = r.at("assumption").get<std::string>();
      row.r_st = json_opt<Round>(r.at("r_st"));
      row.first_decision = json_opt<Round>(r.at("first_decision"));
      row.last_decision = json_opt<Round>(r.at("last_decision"));
      row.bound = json_opt<Round>(r.at("bound"));
      row.horizon = r.at("horizon").get<Round>();
      row.decided = r.at("decided").get<int>();
      row.diameter = json_opt<int>(r.at("diameter"));
      for (const auto& v : r.at("verdicts")) {
        CheckerVerdict verdict;
        verdict.name = v.at("name").get<std::string>();
        const std::string status = v.at("status").get<std::string>();
        for (auto s : {VerdictStatus::kPass, VerdictStatus::kFail, VerdictStatus::kSkipped, VerdictStatus::kInconclusive}) {
          if (to_string(s) == status) verdict.status = s;
        }
        verdict.detail = v.at("detail").get<std::string>();
        row.verdicts.push_back(std::move(verdict));
      }
      row.error = r.at("error").get<std::string>();
      rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("batch report: ") + e.what());
  }
  return rows;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto bad = [&]() { throw Error(ErrorCode::kInvalidArgument, "bad seed list '" + text + "'"); };
  if (text.empty()) return seeds;
  try {
    if (auto dots = text.find(".."); dots != std::string::npos) {
      std::size_t used = 0;
      const auto lo = std::stoull(text.substr(0, dots), &used);
      if (used != dots) bad();
      const std::string rest = text.substr(dots + 2);
      const auto hi = std::stoull(rest, &used);
      if (used != rest.size()) bad();
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      return seeds;
    }
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      std::size_t used = 0;
      seeds.push_back(std::stoull(item, &used));
      if (used != item.size()) bad();
    }
  } catch (const std::logic_error&) {
    bad();
  }
  return seeds;
}

}  // namespace dyncon
