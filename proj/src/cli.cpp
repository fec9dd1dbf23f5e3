#include "dyncon/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyncon/adversary.hpp"
#include "dyncon/batch.hpp"
#include "dyncon/checkers.hpp"
#include "dyncon/error.hpp"
#include "dyncon/graph_core.hpp"
#include "dyncon/harness.hpp"

namespace dyncon {

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::string set_str(const ProcessSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::string dist_str(Distance d) { return is_finite(d) ? std::to_string(d) : "INF"; }

std::string interval_str(Interval i) {
  return "[" + std::to_string(i.first) + "," + std::to_string(i.last) + "]";
}

// Write failures are I/O errors (exit 1), distinct from bad input (exit 2).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_rst(std::ostream& out, const RstReport& rst) {
  out << "r_ST=" << (rst.r_st ? std::to_string(*rst.r_st) : "NONE") << "\n";
  if (!rst.multi_root_rounds.empty()) {
    out << "multi-root rounds: " << rst.multi_root_rounds.size() << " (first " << rst.multi_root_rounds.front()
        << ")\n";
  }
  for (const auto& i : rst.unbounded_intervals) out << "not D-bounded: " << interval_str(i) << "\n";
  out << "global clauses: " << (rst.global_clauses_hold() ? "hold" : "violated") << "\n";
}

void print_validation(std::ostream& out, const Scenario& s) {
  const Oracle oracle(s.rounds);
  std::size_t max_roots = 0;
  int multi = 0;
  for (Round r = 1; r <= s.horizon(); ++r) {
    const auto k = oracle.roots(r).roots.size();
    max_roots = std::max(max_roots, k);
    multi += k > 1 ? 1 : 0;
  }
  out << "scenario: generator=" << s.meta.generator << " seed=" << s.meta.seed << " n=" << s.n << " D=" << s.D
      << " horizon=" << s.horizon() << "\n";
  out << "roots=" << max_roots;
  if (multi > 0) out << " (" << multi << " of " << s.horizon() << " rounds have several roots)";
  out << "\n";
  const StabilityReport stability = oracle.vertex_stable_intervals();
  if (!stability.intervals.empty()) {
    const auto longest = std::max_element(stability.intervals.begin(), stability.intervals.end(),
                                          [](const auto& a, const auto& b) { return a.interval.length() < b.interval.length(); });
    out << "stable root intervals: " << stability.intervals.size() << " (longest " << interval_str(longest->interval)
        << " root " << set_str(longest->vertex_set) << " D^I=" << dist_str(longest->network_interval_diameter)
        << ")\n";
  }
  const RstReport rst = oracle.find_r_st(s.D);
  print_rst(out, rst);
  const bool holds = s.meta.assumption.rfind("ASSUMPTION", 0) == 0;
  out << (holds ? "assumption holds: " : "assumption violated: ") << s.meta.assumption << "\n";
}

void print_decisions(std::ostream& out, const Trace& trace) {
  int decided = 0;
  std::vector<Value> values;
  Round lo = 0;
  Round hi = 0;
  for (const auto& d : trace.decisions) {
    if (!d) continue;
    ++decided;
    values.push_back(d->value);
    lo = lo == 0 ? d->round : std::min(lo, d->round);
    hi = std::max(hi, d->round);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  out << "decided " << decided << "/" << trace.n;
  if (decided > 0) {
    out << " values={";
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    out << "} rounds=" << lo << ".." << hi;
  }
  out << "\n";
}

std::string report_json(const Scenario& s, const Trace& trace, const std::vector<CheckerVerdict>& verdicts) {
  nlohmann::json decisions = nlohmann::json::array();
  for (const auto& d : trace.decisions) {
    decisions.push_back(d ? nlohmann::json{{"value", d->value}, {"round", d->round}} : nlohmann::json(nullptr));
  }
  nlohmann::json j{{"scenario_digest", hex64(trace.scenario_digest)},
                   {"generator", s.meta.generator},
                   {"seed", s.meta.seed},
                   {"n", s.n},
                   {"D", s.D},
                   {"horizon", trace.horizon},
                   {"prune", trace.prune},
                   {"decisions", std::move(decisions)},
                   {"verdicts", nlohmann::json::parse(verdicts_to_json(verdicts))}};
  return j.dump(1) + "\n";
}

struct Summary {
  int rows = 0;
  int errors = 0;
  std::map<std::string, std::map<std::string, int>> verdicts;  // name -> status -> count
  std::map<int, int> slack;                                    // bound - last decision -> count
  std::map<int, std::vector<int>> diameters;                   // n -> measured diameters
};

Summary summarize(const std::vector<BatchRow>& rows) {
  Summary s;
  for (const auto& r : rows) {
    ++s.rows;
    if (!r.error.empty()) ++s.errors;
    for (const auto& v : r.verdicts) ++s.verdicts[v.name][std::string(to_string(v.status))];
    if (r.bound && r.last_decision && r.decided == r.n) ++s.slack[*r.bound - *r.last_decision];
    if (r.diameter) s.diameters[r.n].push_back(*r.diameter);
  }
  return s;
}

void print_summary(std::ostream& out, const Summary& s) {
  out << "rows=" << s.rows << " errors=" << s.errors << "\n";
  for (const auto& [name, counts] : s.verdicts) {
    out << name << ":";
    for (const auto& [status, count] : counts) out << " " << status << "=" << count;
    out << "\n";
  }
  if (!s.slack.empty()) {
    out << "slack (bound - last decision):";
    for (const auto& [slack, count] : s.slack) out << " " << slack << ":" << count;
    out << "\n";
  }
}

std::string diameter_table(const Summary& s) {
  std::ostringstream out;
  out << "n,samples,min,max,mean\n";
  for (const auto& [n, ds] : s.diameters) {
    const double mean = std::accumulate(ds.begin(), ds.end(), 0.0) / static_cast<double>(ds.size());
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", mean);
    out << n << "," << ds.size() << "," << *std::min_element(ds.begin(), ds.end()) << ","
        << *std::max_element(ds.begin(), ds.end()) << "," << buf << "\n";
  }
  return out.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and checker for consensus in dynamic directed networks"};
  app.require_subcommand(1);

  GenRequest gen;
  std::string gen_out;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a scenario and validate it with the oracle");
  generate_cmd->add_option("--gen", gen.gen, "Generator name")->required()->check(CLI::IsMember(generator_names()));
  generate_cmd->add_option("--n", gen.n, "Number of processes")->check(CLI::NonNegativeNumber);
  generate_cmd->add_option("--d", gen.D, "Diameter bound D")->check(CLI::NonNegativeNumber);
  generate_cmd->add_option("--seed", gen.seed, "Random seed");
  generate_cmd->add_option("--horizon", gen.horizon, "Number of rounds")->check(CLI::NonNegativeNumber);
  generate_cmd->add_option("--r-st", gen.r_st, "First round of the stability window (stable_window)");
  generate_cmd->add_option("--window", gen.window, "Stability window length (stable_window)");
  generate_cmd->add_option("--kappa", gen.kappa, "Round after which the line reverses (reversing_line)");
  generate_cmd->add_option("--n0", gen.n0, "Size of the first root (two_roots)");
  generate_cmd->add_option("--n1", gen.n1, "Size of the second root (two_roots)");
  generate_cmd->add_option("--root-size", gen.root_size, "Root set size (expander)");
  generate_cmd->add_option("--degree", gen.degree, "Regular degree (expander)");
  bool static_expander = false;
  generate_cmd->add_flag("--static", static_expander, "Same expander topology in every round");
  generate_cmd->add_option("--window-start", gen.window_start, "First window round (short_window)");
  generate_cmd->add_option("--extend", gen.extend, "Extra window rounds (short_window)");
  generate_cmd->add_flag("--unlock-resets", gen.unlock_resets_lock_round, "Unlock also resets lockRound to 0");
  generate_cmd->add_option("--out", gen_out, "Scenario file to write")->required();

  std::string scenario_path;
  std::string trace_path;
  std::string run_report;
  bool prune = false;
  Round horizon_override = 0;
  bool no_approx = false;
  auto* run_cmd = app.add_subcommand("run", "Run both algorithms on a scenario and check the trace");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--trace", trace_path, "Trace file to write (JSON lines)");
  run_cmd->add_option("--report", run_report, "Verdict report to write (JSON)");
  run_cmd->add_flag("--prune", prune, "Drop approximation labels older than 4D+1 rounds");
  run_cmd->add_option("--horizon", horizon_override, "Run only the first rounds");
  run_cmd->add_flag("--no-approx-check", no_approx, "Skip the approximation invariant checker");

  auto* check_cmd = app.add_subcommand("check", "Check an existing trace against its scenario");
  check_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  check_cmd->add_option("--trace", trace_path, "Trace file")->required();
  check_cmd->add_flag("--no-approx-check", no_approx, "Skip the approximation invariant checker");

  std::vector<std::string> query;
  int query_d = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "Query the ground-truth oracle");
  oracle_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  oracle_cmd->add_option("--query", query, "roots | cd P Q R | diam R S | rst | intervals | short")
      ->required()
      ->expected(1, 4);
  oracle_cmd->add_option("--d", query_d, "D for rst/short (default: the scenario's)");

  BatchConfig batch;
  std::string seeds_text;
  int seed_count = -1;
  std::string batch_csv_path;
  std::string batch_json_path;
  bool approx_checks = false;
  auto* batch_cmd = app.add_subcommand("batch", "Run a seeded sweep and aggregate verdicts");
  batch_cmd->add_option("--gen", batch.gen, "Generator name")->check(CLI::IsMember(generator_names()));
  batch_cmd->add_option("--seeds", seeds_text, "Seeds: N, A..B or A,B,C");
  batch_cmd->add_option("--count", seed_count, "Use seeds 1..COUNT")->excludes("--seeds");
  batch_cmd->add_option("--n-min", batch.n_min, "Smallest n")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--n-max", batch.n_max, "Largest n")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--n-values", batch.n_values, "Explicit n values (one row per seed and n)")->delimiter(',');
  batch_cmd->add_option("--d-min", batch.d_min, "Smallest D");
  batch_cmd->add_option("--d-max", batch.d_max, "Largest D (default n-1)");
  batch_cmd->add_option("--horizon", batch.horizon, "Number of rounds (generator default if 0)");
  batch_cmd->add_flag("--prune", batch.prune, "Run with pruning");
  batch_cmd->add_flag("--approx", approx_checks, "Also run the approximation invariant checker");
  batch_cmd->add_flag("--oracle-only", batch.oracle_only, "Only generate and measure, do not run");
  batch_cmd->add_option("--threads", batch.threads, "Worker threads (default: all)");
  batch_cmd->add_option("--csv", batch_csv_path, "CSV report to write");
  batch_cmd->add_option("--json", batch_json_path, "JSON report to write");

  std::vector<std::string> report_inputs;
  std::string report_csv;
  auto* report_cmd = app.add_subcommand("report", "Aggregate JSON batch reports");
  report_cmd->add_option("--json", report_inputs, "Batch JSON reports")->required();
  report_cmd->add_option("--csv", report_csv, "Write the diameter table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*generate_cmd) {
      if (static_expander) gen.reshuffle = false;
      const Scenario s = generate(gen);
      write_file(gen_out, scenario_to_json(s));
      print_validation(out, s);
      out << "wrote " << gen_out << "\n";
      return kOk;
    }

    if (*run_cmd) {
      const Scenario s = scenario_load(scenario_path);
      RunOptions options;
      options.prune = prune;
      if (horizon_override > 0) options.horizon_override = horizon_override;
      const Trace trace = run(s, options);
      const Oracle oracle(s.rounds);
      const auto verdicts = check_all(trace, s, oracle, {true, !no_approx, true});
      print_decisions(out, trace);
      for (const auto& v : verdicts) out << verdict_line(v) << "\n";
      if (!trace_path.empty()) write_file(trace_path, trace_to_jsonl(trace, verdicts_to_json(verdicts)));
      if (!run_report.empty()) write_file(run_report, report_json(s, trace, verdicts));
      return any_failed(verdicts) ? kFailure : kOk;
    }

    if (*check_cmd) {
      const Scenario s = scenario_load(scenario_path);
      const Trace trace = trace_from_jsonl(read_file(trace_path));
      if (trace.scenario_digest != scenario_digest(s)) {
        err << "trace was recorded for scenario " << hex64(trace.scenario_digest) << ", not "
            << hex64(scenario_digest(s)) << "\n";
        return kUsage;
      }
      const Oracle oracle(s.rounds);
      const auto verdicts = check_all(trace, s, oracle, {true, !no_approx, true});
      print_decisions(out, trace);
      for (const auto& v : verdicts) out << verdict_line(v) << "\n";
      return any_failed(verdicts) ? kFailure : kOk;
    }

    if (*oracle_cmd) {
      const Scenario s = scenario_load(scenario_path);
      const Oracle oracle(s.rounds);
      const int D = query_d > 0 ? query_d : s.D;
      auto arg = [&](std::size_t i) {
        if (i >= query.size()) throw Error(ErrorCode::kInvalidArgument, "query '" + query[0] + "' needs more arguments");
        std::size_t used = 0;
        const int v = std::stoi(query[i], &used);
        if (used != query[i].size()) throw Error(ErrorCode::kInvalidArgument, "not a number: " + query[i]);
        return v;
      };
      const std::string& what = query[0];
      if (what == "roots") {
        for (Round r = 1; r <= oracle.horizon(); ++r) {
          out << "round " << r << ":";
          for (const auto& root : oracle.roots(r).roots) out << " " << set_str(root);
          out << "\n";
        }
      } else if (what == "cd") {
        out << dist_str(oracle.causal_distance(arg(3), arg(1), arg(2))) << "\n";
      } else if (what == "diam") {
        const Interval I{arg(1), arg(2)};
        const Distance d = oracle.network_causal_diameter(I);
        for (Round x = I.first; x <= I.last; ++x) {
          out << "D^" << x << "=" << dist_str(oracle.network_round_diameter(x)) << "\n";
        }
        out << "D^I=" << dist_str(d) << "\n";
      } else if (what == "rst") {
        print_rst(out, oracle.find_r_st(D));
      } else if (what == "intervals") {
        const StabilityReport rep = oracle.vertex_stable_intervals();
        for (const auto& iv : rep.intervals) {
          out << interval_str(iv.interval) << " root " << set_str(iv.vertex_set)
              << " D(C^I)=" << dist_str(iv.interval_diameter) << " D^I=" << dist_str(iv.network_interval_diameter)
              << " d_bounded_for=" << (iv.d_bounded_for ? std::to_string(*iv.d_bounded_for) : "NONE") << "\n";
        }
        if (!rep.multi_root_rounds.empty()) out << "multi-root rounds: " << rep.multi_root_rounds.size() << "\n";
      } else if (what == "short") {
        const auto r = oracle.find_short_window(D);
        out << "short window start=" << (r ? std::to_string(*r) : "NONE") << "\n";
      } else {
        err << "unknown query '" << what << "'\n";
        return kUsage;
      }
      return kOk;
    }

    if (*batch_cmd) {
      if (seed_count >= 0) {
        for (int i = 1; i <= seed_count; ++i) batch.seeds.push_back(static_cast<std::uint64_t>(i));
      } else {
        batch.seeds = parse_seed_list(seeds_text);
      }
      if (batch.n_min > batch.n_max) throw Error(ErrorCode::kInvalidArgument, "--n-min exceeds --n-max");
      batch.checks.approx = approx_checks;
      const auto rows = run_batch(batch);
      if (!batch_csv_path.empty()) write_file(batch_csv_path, batch_csv(rows));
      if (!batch_json_path.empty()) write_file(batch_json_path, batch_json(rows));
      const Summary summary = summarize(rows);
      print_summary(out, summary);
      bool failed = false;
      for (const auto& r : rows) {
        if (!r.failed()) continue;
        failed = true;
        out << "seed " << r.seed << " n=" << r.n << ": ";
        if (!r.error.empty()) out << r.error;
        for (const auto& v : r.verdicts) {
          if (v.failed()) out << verdict_line(v);
        }
        out << "\n";
      }
      return failed ? kFailure : kOk;
    }

    if (*report_cmd) {
      std::vector<BatchRow> rows;
      for (const auto& path : report_inputs) {
        auto more = batch_from_json(read_file(path));
        rows.insert(rows.end(), more.begin(), more.end());
      }
      const Summary summary = summarize(rows);
      print_summary(out, summary);
      const std::string table = diameter_table(summary);
      out << "diameters:\n" << table;
      if (!report_csv.empty()) write_file(report_csv, table);
      return kOk;
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kFailure;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace dyncon
