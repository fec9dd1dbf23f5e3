#include "dyncon/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dyncon/digest.hpp"
#include "dyncon/error.hpp"

namespace dyncon {

using nlohmann::json;

void validate(const Scenario& s) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kInvalidArgument, why); };
  if (s.n < 1) fail("n must be >= 1");
  if (s.D < 1) fail("D must be >= 1");
  if (s.rounds.n() != s.n) fail("rounds are over " + std::to_string(s.rounds.n()) + " processes, n is " + std::to_string(s.n));
  if (s.horizon() < 1) fail("horizon must be >= 1");
  if (static_cast<int>(s.inputs.size()) != s.n) {
    fail("expected " + std::to_string(s.n) + " inputs, got " + std::to_string(s.inputs.size()));
  }
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["n"] = s.n;
  j["D"] = s.D;
  j["horizon"] = s.horizon();
  j["inputs"] = s.inputs;
  json rounds = json::array();
  for (const auto& g : s.rounds.rounds()) {
    json edges = json::array();
    for (const auto& [from, to] : g.edges()) edges.push_back({from, to});
    rounds.push_back(std::move(edges));
  }
  j["rounds"] = std::move(rounds);
  json meta;
  meta["generator"] = s.meta.generator;
  meta["seed"] = s.meta.seed;
  meta["assumption"] = s.meta.assumption;
  meta["claimed_r_st"] = s.meta.claimed_r_st ? json(*s.meta.claimed_r_st) : json(nullptr);
  if (s.meta.unlock_resets_lock_round) meta["unlock_resets_lock_round"] = true;
  j["meta"] = std::move(meta);
  return j.dump() + "\n";
}

namespace {

[[noreturn]] void parse_fail(const std::string& why) { throw Error(ErrorCode::kParseError, why); }

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail("missing field '" + where + key + "'");
  return *it;
}

long long as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail("field '" + where + "': expected an integer");
  return v.get<long long>();
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }

  Scenario s;
  s.n = static_cast<int>(as_int(field(j, "n", ""), "n"));
  s.D = static_cast<int>(as_int(field(j, "D", ""), "D"));
  const long long horizon = as_int(field(j, "horizon", ""), "horizon");
  if (s.n < 1) parse_fail("field 'n': must be >= 1");

  const json& inputs = field(j, "inputs", "");
  if (!inputs.is_array()) parse_fail("field 'inputs': expected an array");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    s.inputs.push_back(as_int(inputs[i], "inputs[" + std::to_string(i) + "]"));
  }

  const json& rounds = field(j, "rounds", "");
  if (!rounds.is_array()) parse_fail("field 'rounds': expected an array");
  if (static_cast<long long>(rounds.size()) != horizon) {
    parse_fail("field 'horizon': " + std::to_string(horizon) + " but 'rounds' has " +
               std::to_string(rounds.size()) + " entries");
  }
  std::vector<RoundGraph> graphs;
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const std::string where = "rounds[" + std::to_string(r) + "]";
    if (!rounds[r].is_array()) parse_fail("field '" + where + "': expected an array of edges");
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < rounds[r].size(); ++e) {
      const std::string at = where + "[" + std::to_string(e) + "]";
      const json& edge = rounds[r][e];
      if (!edge.is_array() || edge.size() != 2) parse_fail("field '" + at + "': expected [from, to]");
      edges.emplace_back(static_cast<ProcessId>(as_int(edge[0], at + "[0]")),
                         static_cast<ProcessId>(as_int(edge[1], at + "[1]")));
    }
    try {
      graphs.emplace_back(s.n, std::move(edges));
    } catch (const Error& e) {
      parse_fail("field '" + where + "': " + e.what());
    }
  }
  s.rounds = GraphSequence(s.n, std::move(graphs));

  const json& meta = field(j, "meta", "");
  const json& gen = field(meta, "generator", "meta.");
  if (!gen.is_string()) parse_fail("field 'meta.generator': expected a string");
  s.meta.generator = gen.get<std::string>();
  const json& seed = field(meta, "seed", "meta.");
  if (!seed.is_number_integer()) parse_fail("field 'meta.seed': expected an integer");
  s.meta.seed = seed.get<std::uint64_t>();
  const json& tag = field(meta, "assumption", "meta.");
  if (!tag.is_string()) parse_fail("field 'meta.assumption': expected a string");
  s.meta.assumption = tag.get<std::string>();
  const json& claimed = field(meta, "claimed_r_st", "meta.");
  if (!claimed.is_null()) s.meta.claimed_r_st = static_cast<Round>(as_int(claimed, "meta.claimed_r_st"));
  if (auto it = meta.find("unlock_resets_lock_round"); it != meta.end()) {
    if (!it->is_boolean()) parse_fail("field 'meta.unlock_resets_lock_round': expected a boolean");
    s.meta.unlock_resets_lock_round = it->get<bool>();
  }

  try {
    validate(s);
  } catch (const Error& e) {
    parse_fail(e.what());
  }
  return s;
}

void scenario_save(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scenario_to_json(scenario);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Scenario scenario_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::uint64_t scenario_digest(const Scenario& scenario) { return fnv1a(scenario_to_json(scenario)); }

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace dyncon
