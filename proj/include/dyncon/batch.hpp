#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyncon/checkers.hpp"
#include "dyncon/scenario.hpp"

namespace dyncon {

/// Generator name plus every knob any generator takes; zero means "default".
struct GenRequest {
  std::string gen;
  std::uint64_t seed = 1;
  int n = 0;
  int D = 0;
  Round horizon = 0;
  Round r_st = 0;
  Round window = 0;
  Round kappa = -1;
  int n0 = 0;
  int n1 = 0;
  int root_size = 0;
  int degree = 4;
  bool reshuffle = true;
  Round window_start = 0;
  Round extend = 0;
  bool unlock_resets_lock_round = false;
};

const std::vector<std::string>& generator_names();

/// Throws kInfeasible (bad parameters) or kInvalidArgument (unknown generator).
Scenario generate(const GenRequest& request);

struct BatchConfig {
  std::string gen = "stable_window";
  std::vector<std::uint64_t> seeds;
  int n_min = 3;
  int n_max = 16;
  std::vector<int> n_values;  // if set, one row per (seed, n) instead of drawing n
  int d_min = 2;
  int d_max = 0;  // 0: n-1
  Round horizon = 0;
  bool prune = false;
  CheckSelection checks{true, false, true};
  bool oracle_only = false;
  int threads = 0;  // 0: OpenMP default
};

struct BatchRow {
  std::uint64_t seed = 0;
  std::string generator;
  int n = 0;
  int D = 0;
  std::string assumption;
  std::optional<Round> r_st;
  std::optional<Round> first_decision;
  std::optional<Round> last_decision;
  std::optional<Round> bound;
  Round horizon = 0;
  int decided = 0;
  std::optional<int> diameter;  // network causal diameter over the whole horizon
  std::vector<CheckerVerdict> verdicts;
  std::string error;

  bool failed() const { return !error.empty() || any_failed(verdicts); }
};

/// Parameters drawn for one seed (n, D, window placement) and the resulting scenario.
Scenario batch_scenario(const BatchConfig& config, std::uint64_t seed, std::optional<int> fixed_n);

/// Rows ordered by (seed, n) regardless of thread count.
std::vector<BatchRow> run_batch(const BatchConfig& config);

BatchRow evaluate(const Scenario& scenario, const BatchConfig& config);

std::string batch_csv(const std::vector<BatchRow>& rows);
std::string batch_json(const std::vector<BatchRow>& rows);
std::vector<BatchRow> batch_from_json(const std::string& text);

/// Parses "7", "1..500" or "1,4,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace dyncon
