#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scenario.hpp"

namespace {

using namespace hardylab;
using namespace hardylab::cli;

causal::SpacetimeEvent parse_query_flag(const std::string& text) {
  std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw ScenarioError("--query expects t,x");
  try {
    double t = std::stod(text.substr(0, comma));
    double x = std::stod(text.substr(comma + 1));
    return causal::SpacetimeEvent{t, x, "query"};
  } catch (const std::exception&) {
    throw ScenarioError("--query expects numeric t,x");
  }
}

std::optional<ScenarioFile> load_scenario_flag(const std::string& path,
                                               const std::string& kind) {
  if (path.empty() || path == "default") return std::nullopt;
  ScenarioFile f = load_scenario_file(path);
  if (f.kind != kind)
    throw ScenarioError("scenario kind '" + f.kind + "' does not match the " +
                        kind + " subcommand");
  return f;
}

void emit(const json& result, bool json_output,
          void (*renderer)(const json&)) {
  if (json_output)
    std::cout << result.dump(2) << "\n";
  else
    renderer(result);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hardylab: a workbench for the two-interferometer coincidence "
      "experiment, pre/post-selected probabilities, light-cone reality "
      "criteria and product-rule functions"};
  app.fallthrough();
  app.require_subcommand(1);

  bool json_output = false;
  std::string scenario_path;
  std::uint64_t seed = 2026;
  double tolerance = 0.0;
  app.add_flag("--json", json_output, "emit JSON instead of tables");
  app.add_option("--scenario", scenario_path,
                 "scenario file ('default' for the built-in scenario)");
  app.add_option("--seed", seed,
                 "seed for randomized checks (HARDYLAB_SEED overrides)");
  app.add_option("--tolerance", tolerance,
                 "comparison tolerance (default 1e-12 for states, 1e-9 for "
                 "product-rule checks)");

  CLI::App* cmd_hardy = app.add_subcommand(
      "hardy", "stage-by-stage states and outcome probabilities");
  CLI::App* cmd_abl = app.add_subcommand(
      "abl", "pre/post-selected probabilities and element assignment");

  CLI::App* cmd_causal = app.add_subcommand(
      "causal", "light-cone regions, orderings and reality criteria");
  std::vector<double> extra_boosts;
  std::vector<std::string> extra_queries;
  std::string region_filter;
  cmd_causal->add_option("--boost", extra_boosts,
                         "additional frame velocity (repeatable)");
  cmd_causal->add_option("--query", extra_queries,
                         "additional query point t,x (repeatable)");
  cmd_causal->add_option("--region", region_filter,
                         "restrict region reports to union or intersection")
      ->check(CLI::IsMember({"union", "intersection"}));

  CLI::App* cmd_prodrule = app.add_subcommand(
      "prodrule", "product-rule functions on a maximal commuting set");
  cmd_prodrule->require_subcommand(0, 1);
  std::size_t enum_n = 3;
  std::string function_text;
  std::size_t trials = 1000;
  CLI::App* cmd_enumerate = cmd_prodrule->add_subcommand(
      "enumerate", "all product-closed 0/1 assignments on the lattice");
  cmd_enumerate->add_option("--n", enum_n, "dimension (3..5)");
  CLI::App* cmd_check = cmd_prodrule->add_subcommand(
      "check", "randomized product-rule trials for a function");
  cmd_check->add_option("--function", function_text, "function JSON")
      ->required();
  cmd_check->add_option("--trials", trials, "number of random operator pairs");
  CLI::App* cmd_classify = cmd_prodrule->add_subcommand(
      "classify", "classify a function by its values on projectors");
  cmd_classify->add_option("--function", function_text, "function JSON")
      ->required();

  CLI::App* cmd_demo =
      app.add_subcommand("demo", "scripted end-to-end narrative");
  std::string narrative = "full";
  cmd_demo->add_option("narrative", narrative, "full or hardy-paradox")
      ->check(CLI::IsMember({"full", "hardy-paradox"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (const char* env_seed = std::getenv("HARDYLAB_SEED")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env_seed, &end, 10);
      if (end == env_seed || *end != '\0')
        throw ScenarioError("HARDYLAB_SEED must be an unsigned integer");
      seed = v;
    }
    RunOptions opts;
    opts.json_output = json_output;
    opts.seed = seed;
    if (tolerance > 0.0) {
      opts.state_tolerance = tolerance;
      opts.prodrule_tolerance = tolerance;
    }

    if (cmd_hardy->parsed()) {
      HardyScenario s;
      if (auto f = load_scenario_flag(scenario_path, "hardy"))
        s = hardy_from_body(f->body);
      emit(run_hardy(s), opts.json_output, render_hardy);
      return 0;
    }

    if (cmd_abl->parsed()) {
      AblScenario s;
      if (auto f = load_scenario_flag(scenario_path, "abl"))
        s = abl_from_body(f->body);
      else
        s.counterfactual = true;  // the built-in scenario is the
                                  // counterfactual analysis, explicitly
      emit(run_abl(s), opts.json_output, render_abl);
      return 0;
    }

    if (cmd_causal->parsed()) {
      CausalScenario s;
      if (auto f = load_scenario_flag(scenario_path, "causal"))
        s = causal_from_body(f->body);
      for (double b : extra_boosts) s.layout.boosts.push_back(b);
      for (const auto& q : extra_queries)
        s.queries.push_back(parse_query_flag(q));
      s.layout.validate();
      std::optional<std::string> filter;
      if (!region_filter.empty()) filter = region_filter;
      emit(run_causal(s, filter), opts.json_output, render_causal);
      return 0;
    }

    if (cmd_prodrule->parsed()) {
      ProdruleScenario s;
      bool have_subcommand = cmd_enumerate->parsed() || cmd_check->parsed() ||
                             cmd_classify->parsed();
      if (auto f = load_scenario_flag(scenario_path, "prodrule")) {
        if (have_subcommand)
          throw ScenarioError(
              "give either a prodrule scenario file or an inline "
              "subcommand, not both");
        s = prodrule_from_body(f->body);
      } else if (cmd_enumerate->parsed()) {
        s.command = "enumerate";
        s.n = enum_n;
      } else if (cmd_check->parsed()) {
        s.command = "check";
        s.function = json::parse(function_text, nullptr, false);
        if (s.function->is_discarded())
          throw ScenarioError("--function is not valid JSON");
        s.trials = trials;
      } else if (cmd_classify->parsed()) {
        s.command = "classify";
        s.function = json::parse(function_text, nullptr, false);
        if (s.function->is_discarded())
          throw ScenarioError("--function is not valid JSON");
      } else {
        throw ScenarioError(
            "prodrule needs a subcommand (enumerate, check, classify) or a "
            "scenario file");
      }
      emit(run_prodrule(s, opts), opts.json_output, render_prodrule);
      return 0;
    }

    if (cmd_demo->parsed()) {
      emit(run_demo(narrative, opts), opts.json_output, render_demo);
      return 0;
    }

    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
