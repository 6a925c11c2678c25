#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardylab/abl.hpp"
#include "hardylab/causal.hpp"
#include "hardylab/hardy.hpp"
#include "hardylab/prodrule.hpp"
#include "json.hpp"

namespace hardylab::cli {

using nlohmann::json;

/// Malformed scenario files and inconsistent flags; mapped to the usage exit
/// code.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// Envelope of every scenario file: {"version": 1, "kind": ..., "body": ...}.
/// Unknown fields are rejected.
struct ScenarioFile {
  int version = 1;
  std::string kind;
  json body;
};

ScenarioFile parse_scenario(const json& doc);
ScenarioFile load_scenario_file(const std::string& path);

struct HardyScenario {
  bool bs2_plus_present = true;
  bool bs2_minus_present = true;
  hardy::Stage stage = hardy::Stage::AfterBoth;
  std::vector<std::string> outcome;  // joint labels; empty = no outcome query
};

struct AblObservable {
  std::string name;
  std::vector<std::string> labels;  // empty = named observable (U+, U-, U+U-)
};

struct AblScenario {
  hardy::Stage pre_stage = hardy::Stage::AfterP;
  std::string post_outcome = "d+d-";
  std::vector<AblObservable> observables{{"U+", {}}, {"U-", {}}, {"U+U-", {}}};
  std::vector<abl::ProductPair> pairs{{"U+", "U-", "U+U-"}};
  bool counterfactual = false;
};

struct CausalScenario {
  causal::Scenario layout = causal::Scenario::default_hardy();
  std::vector<causal::SpacetimeEvent> queries;  // empty = both detectors
  std::vector<causal::SpacetimeEvent> preparation_events;
  std::vector<causal::SpacetimeEvent> collapse_events;
};

struct ProdruleScenario {
  std::string command;  // enumerate | check | classify
  std::size_t n = 3;
  std::optional<json> function;
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
};

HardyScenario hardy_from_body(const json& body);
json hardy_to_body(const HardyScenario& s);

AblScenario abl_from_body(const json& body);
json abl_to_body(const AblScenario& s);

CausalScenario causal_from_body(const json& body);
json causal_to_body(const CausalScenario& s);

ProdruleScenario prodrule_from_body(const json& body);
json prodrule_to_body(const ProdruleScenario& s);

json envelope(const std::string& kind, json body);

/// Function descriptions used by `prodrule check/classify`:
/// {"case":"const1"|"const0"|"case2"|"case3"|"lattice", "n":N, ...}.
prodrule::ProductRuleFunction function_from_json(const json& j);
json function_to_json(const prodrule::ProductRuleFunction& f);

struct RunOptions {
  bool json_output = false;
  std::uint64_t seed = 2026;
  double state_tolerance = 1e-12;
  double prodrule_tolerance = prodrule::kProdTol;
};

json run_hardy(const HardyScenario& s);
json run_abl(const AblScenario& s);
json run_causal(const CausalScenario& s,
                std::optional<std::string> region_filter = std::nullopt);
json run_prodrule(const ProdruleScenario& s, const RunOptions& opts);
json run_demo(const std::string& narrative, const RunOptions& opts);

void render_hardy(const json& result);
void render_abl(const json& result);
void render_causal(const json& result);
void render_prodrule(const json& result);
void render_demo(const json& result);

}  // namespace hardylab::cli
