#pragma once

#include "json.hpp"
#include "rif/complexes.hpp"
#include "rif/rigid.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rif {

using Json = nlohmann::json;

// Malformed or inconsistent input; the message starts with a line or field path.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlaceDecl {
  PlaceSystem system;
  bool allow_violations = false;
};

struct Operation {
  std::string op;
  Json params;  // validated against the declarations at load time
  bool verify = true;
};

struct Scenario {
  std::string name;
  std::string expect = "pass";  // "fail" marks a negative control for the suite
  std::uint64_t seed = 0;
  Int budget = 4096;            // element-count cap for enumeration checks
  double time_budget = 60;      // seconds, enforced by the suite only
  std::optional<FiniteGroup> group;
  std::map<std::string, GammaModule> modules;
  std::map<std::string, PlaceDecl> places;
  std::map<std::string, IsogenyPair> pairs;
  std::map<std::string, LatticeComplex> complexes;
  std::vector<Operation> operations;
};

// Text to JSON; empty or blank text is the empty scenario.  Syntax errors carry line and column.
Json parse_scenario_text(const std::string& text);
Scenario load_scenario(const Json& doc);
Scenario load_scenario_text(const std::string& text);

// One canonical serialization: sorted keys, two-space indent, trailing newline.
std::string serialize(const Json& doc);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<Int> budget;
  bool fail_fast = false;
};
struct RunOutcome {
  Json report;
  int exit_code = 0;  // 0 every enabled verification passed, 1 some failed
};
// Throws InputError when an operation rejects its inputs.
RunOutcome run_scenario(const Scenario& s, const RunOptions& options = {});

struct GenerateBounds {
  std::size_t max_group = 12, max_rank = 4, max_places = 8;
  Int max_modulus = 12;
  bool negative_control = false;
};
// The caps above are also the largest accepted bounds; anything beyond throws InputError.
std::string generate_scenario(std::uint64_t seed, const GenerateBounds& bounds = {});

struct BundledScenario {
  std::string file;
  std::string text;
};
const std::vector<BundledScenario>& bundled_scenarios();

}  // namespace rif
