#include "scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hardylab::cli {

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& context) {
  if (!obj.is_object())
    throw ScenarioError(context + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ScenarioError("unknown field '" + key + "' in " + context);
}

hardy::Stage parse_stage(const json& j, const std::string& context) {
  if (!j.is_string()) throw ScenarioError(context + " must be a string");
  try {
    return hardy::stage_from_name(j.get<std::string>());
  } catch (const DomainError& e) {
    throw ScenarioError(std::string(e.what()) + " in " + context);
  }
}

causal::SpacetimeEvent parse_event(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ScenarioError("event '" + name + "' must be a [t, x] pair");
  return causal::SpacetimeEvent{j[0].get<double>(), j[1].get<double>(), name};
}

json event_to_json(const causal::SpacetimeEvent& e) {
  return json::array({e.t, e.x});
}

std::string fmt12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_complex(double re, double im) {
  if (im == 0.0) return fmt12(re);
  if (re == 0.0) return fmt12(im) + "i";
  return fmt12(re) + (im > 0 ? " + " : " - ") + fmt12(std::abs(im)) + "i";
}

std::string event_key(const causal::SpacetimeEvent& e) {
  return "(" + fmt12(e.t) + ", " + fmt12(e.x) + ")";
}

statespace::Projector resolve_observable(const AblObservable& o,
                                         const statespace::Basis& basis) {
  if (!o.labels.empty()) {
    std::vector<statespace::ModeLabel> ls;
    for (const auto& name : o.labels) {
      statespace::ModeLabel l{name};
      if (!basis.contains(l))
        throw ScenarioError("observable '" + o.name + "' uses label '" + name +
                            "' which is not in the pre-stage basis");
      ls.push_back(l);
    }
    return statespace::Projector::onto_labels(basis, ls);
  }
  if (o.name == "U+") return hardy::u_plus(basis);
  if (o.name == "U-") return hardy::u_minus(basis);
  if (o.name == "U+U-") return hardy::u_plus_u_minus(basis);
  throw ScenarioError("unknown named observable '" + o.name +
                      "' (use U+, U-, U+U- or give explicit labels)");
}

}  // namespace

ScenarioFile parse_scenario(const json& doc) {
  require_keys(doc, {"version", "kind", "body"}, "the scenario envelope");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != 1)
    throw ScenarioError("scenario version must be the integer 1");
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw ScenarioError("scenario kind must be a string");
  std::string kind = doc["kind"].get<std::string>();
  const std::set<std::string> kinds{"hardy", "abl", "causal", "prodrule"};
  if (!kinds.count(kind))
    throw ScenarioError("unknown scenario kind '" + kind + "'");
  if (!doc.contains("body"))
    throw ScenarioError("scenario is missing its body");
  return ScenarioFile{1, kind, doc["body"]};
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario file '" + path + "' is not valid JSON: " +
                        e.what());
  }
  return parse_scenario(doc);
}

json envelope(const std::string& kind, json body) {
  return json{{"version", 1}, {"kind", kind}, {"body", std::move(body)}};
}

HardyScenario hardy_from_body(const json& body) {
  require_keys(body,
               {"bs2_plus_present", "bs2_minus_present", "stage", "outcome"},
               "the hardy body");
  HardyScenario s;
  if (body.contains("bs2_plus_present"))
    s.bs2_plus_present = body["bs2_plus_present"].get<bool>();
  if (body.contains("bs2_minus_present"))
    s.bs2_minus_present = body["bs2_minus_present"].get<bool>();
  if (body.contains("stage")) s.stage = parse_stage(body["stage"], "stage");
  if (body.contains("outcome")) {
    if (!body["outcome"].is_array())
      throw ScenarioError("outcome must be an array of mode labels");
    for (const auto& l : body["outcome"])
      s.outcome.push_back(l.get<std::string>());
  }
  return s;
}

json hardy_to_body(const HardyScenario& s) {
  return json{{"bs2_plus_present", s.bs2_plus_present},
              {"bs2_minus_present", s.bs2_minus_present},
              {"stage", hardy::stage_name(s.stage)},
              {"outcome", s.outcome}};
}

AblScenario abl_from_body(const json& body) {
  require_keys(body,
               {"pre_stage", "post_outcome", "observables", "pairs",
                "counterfactual"},
               "the abl body");
  AblScenario s;
  if (body.contains("pre_stage"))
    s.pre_stage = parse_stage(body["pre_stage"], "pre_stage");
  if (body.contains("post_outcome"))
    s.post_outcome = body["post_outcome"].get<std::string>();
  if (body.contains("observables")) {
    if (!body["observables"].is_array())
      throw ScenarioError("observables must be an array");
    s.observables.clear();
    for (const auto& o : body["observables"]) {
      if (o.is_string()) {
        s.observables.push_back({o.get<std::string>(), {}});
      } else {
        require_keys(o, {"name", "labels"}, "an observable entry");
        if (!o.contains("name") || !o.contains("labels"))
          throw ScenarioError("observable entries need name and labels");
        AblObservable obs{o["name"].get<std::string>(), {}};
        for (const auto& l : o["labels"])
          obs.labels.push_back(l.get<std::string>());
        if (obs.labels.empty())
          throw ScenarioError("observable '" + obs.name +
                              "' needs at least one label");
        s.observables.push_back(std::move(obs));
      }
    }
  }
  if (body.contains("counterfactual"))
    s.counterfactual = body["counterfactual"].get<bool>();
  if (body.contains("pairs")) {
    if (!body["pairs"].is_array())
      throw ScenarioError("pairs must be an array of [A, B, AB] triples");
    s.pairs.clear();
    for (const auto& p : body["pairs"]) {
      if (!p.is_array() || p.size() != 3)
        throw ScenarioError("each pair must be an [A, B, AB] triple");
      s.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>(),
                         p[2].get<std::string>()});
    }
  } else {
    s.pairs.clear();
    bool u_plus = false, u_minus = false, joint = false;
    for (const auto& o : s.observables) {
      u_plus |= o.name == "U+";
      u_minus |= o.name == "U-";
      joint |= o.name == "U+U-";
    }
    if (u_plus && u_minus && joint) s.pairs.push_back({"U+", "U-", "U+U-"});
  }
  return s;
}

json abl_to_body(const AblScenario& s) {
  json observables = json::array();
  for (const auto& o : s.observables) {
    if (o.labels.empty())
      observables.push_back(o.name);
    else
      observables.push_back(json{{"name", o.name}, {"labels", o.labels}});
  }
  json pairs = json::array();
  for (const auto& p : s.pairs)
    pairs.push_back(json::array({p.a, p.b, p.ab}));
  return json{{"pre_stage", hardy::stage_name(s.pre_stage)},
              {"post_outcome", s.post_outcome},
              {"observables", std::move(observables)},
              {"pairs", std::move(pairs)},
              {"counterfactual", s.counterfactual}};
}

CausalScenario causal_from_body(const json& body) {
  require_keys(body,
               {"events", "boosts", "queries", "preparation_events",
                "collapse_events"},
               "the causal body");
  CausalScenario s;
  if (body.contains("events")) {
    const auto& ev = body["events"];
    require_keys(ev,
                 {"u_plus_box", "u_minus_box", "bs2_plus", "bs2_minus",
                  "d_plus", "d_minus"},
                 "the events table");
    auto field = [&](const char* name, causal::SpacetimeEvent& slot) {
      if (ev.contains(name)) slot = parse_event(ev[name], name);
    };
    field("u_plus_box", s.layout.u_plus_box);
    field("u_minus_box", s.layout.u_minus_box);
    field("bs2_plus", s.layout.bs2_plus);
    field("bs2_minus", s.layout.bs2_minus);
    field("d_plus", s.layout.d_plus);
    field("d_minus", s.layout.d_minus);
  }
  if (body.contains("boosts")) {
    s.layout.boosts.clear();
    for (const auto& b : body["boosts"])
      s.layout.boosts.push_back(b.get<double>());
  }
  if (body.contains("queries")) {
    for (const auto& q : body["queries"])
      s.queries.push_back(parse_event(q, "query"));
  }
  if (s.queries.empty()) {
    s.queries.push_back(s.layout.d_plus);
    s.queries.push_back(s.layout.d_minus);
  }
  if (body.contains("preparation_events"))
    for (const auto& e : body["preparation_events"])
      s.preparation_events.push_back(parse_event(e, "preparation"));
  if (body.contains("collapse_events"))
    for (const auto& e : body["collapse_events"])
      s.collapse_events.push_back(parse_event(e, "collapse"));
  try {
    s.layout.validate();
  } catch (const DomainError& e) {
    throw ScenarioError(e.what());
  }
  return s;
}

json causal_to_body(const CausalScenario& s) {
  json events{{"u_plus_box", event_to_json(s.layout.u_plus_box)},
              {"u_minus_box", event_to_json(s.layout.u_minus_box)},
              {"bs2_plus", event_to_json(s.layout.bs2_plus)},
              {"bs2_minus", event_to_json(s.layout.bs2_minus)},
              {"d_plus", event_to_json(s.layout.d_plus)},
              {"d_minus", event_to_json(s.layout.d_minus)}};
  json body{{"events", std::move(events)}, {"boosts", s.layout.boosts}};
  json queries = json::array();
  for (const auto& q : s.queries) queries.push_back(event_to_json(q));
  body["queries"] = std::move(queries);
  if (!s.preparation_events.empty()) {
    json prep = json::array();
    for (const auto& e : s.preparation_events)
      prep.push_back(event_to_json(e));
    body["preparation_events"] = std::move(prep);
  }
  if (!s.collapse_events.empty()) {
    json col = json::array();
    for (const auto& e : s.collapse_events) col.push_back(event_to_json(e));
    body["collapse_events"] = std::move(col);
  }
  return body;
}

ProdruleScenario prodrule_from_body(const json& body) {
  require_keys(body, {"command", "n", "function", "trials", "seed"},
               "the prodrule body");
  ProdruleScenario s;
  if (!body.contains("command") || !body["command"].is_string())
    throw ScenarioError("the prodrule body needs a command string");
  s.command = body["command"].get<std::string>();
  if (s.command != "enumerate" && s.command != "check" &&
      s.command != "classify")
    throw ScenarioError("prodrule command must be enumerate, check or "
                        "classify");
  if (body.contains("n")) s.n = body["n"].get<std::size_t>();
  if (body.contains("function")) s.function = body["function"];
  if (body.contains("trials")) s.trials = body["trials"].get<std::size_t>();
  if (body.contains("seed")) s.seed = body["seed"].get<std::uint64_t>();
  if (s.command != "enumerate" && !s.function)
    throw ScenarioError("prodrule " + s.command + " needs a function");
  return s;
}

json prodrule_to_body(const ProdruleScenario& s) {
  json body{{"command", s.command}};
  if (s.command == "enumerate") body["n"] = s.n;
  if (s.function) body["function"] = *s.function;
  if (s.command == "check") body["trials"] = s.trials;
  if (s.seed) body["seed"] = *s.seed;
  return body;
}

prodrule::ProductRuleFunction function_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("case") || !j.contains("n"))
      throw ScenarioError("a function needs at least case and n");
    std::string kase = j["case"].get<std::string>();
    std::size_t n = j["n"].get<std::size_t>();
    if (kase == "const1") {
      require_keys(j, {"case", "n"}, "a const1 function");
      return prodrule::ProductRuleFunction::const1(n);
    }
    if (kase == "const0") {
      require_keys(j, {"case", "n"}, "a const0 function");
      return prodrule::ProductRuleFunction::const0(n);
    }
    if (kase == "case2") {
      require_keys(j, {"case", "n", "index", "alpha", "signed"},
                   "a case2 function");
      if (!j.contains("index") || !j.contains("alpha"))
        throw ScenarioError("case2 needs index and alpha");
      bool sign = j.value("signed", false);
      return prodrule::ProductRuleFunction::case2(
          n, j["index"].get<std::size_t>(), j["alpha"].get<double>(), sign);
    }
    if (kase == "case3") {
      require_keys(j, {"case", "n", "indices", "alphas", "signed"},
                   "a case3 function");
      if (!j.contains("indices") || !j.contains("alphas"))
        throw ScenarioError("case3 needs indices and alphas");
      std::vector<std::size_t> indices =
          j["indices"].get<std::vector<std::size_t>>();
      std::vector<double> alphas = j["alphas"].get<std::vector<double>>();
      std::vector<bool> sign;
      if (j.contains("signed")) sign = j["signed"].get<std::vector<bool>>();
      return prodrule::ProductRuleFunction::case3(n, std::move(indices),
                                                  std::move(alphas),
                                                  std::move(sign));
    }
    if (kase == "lattice") {
      require_keys(j, {"case", "n", "ones"}, "a lattice function");
      if (!j.contains("ones"))
        throw ScenarioError("lattice functions need their one-sets");
      auto one_sets =
          j["ones"].get<std::vector<std::vector<std::size_t>>>();
      return prodrule::ProductRuleFunction::lattice(
          prodrule::ExplicitLattice::from_one_sets(n, one_sets));
    }
    throw ScenarioError("unknown function case '" + kase + "'");
  } catch (const DomainError& e) {
    throw ScenarioError(std::string("invalid function: ") + e.what());
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("invalid function JSON: ") + e.what());
  }
}

json function_to_json(const prodrule::ProductRuleFunction& f) {
  using F = prodrule::ProductRuleFunction;
  const auto& form = f.form();
  if (std::holds_alternative<F::Const1>(form))
    return json{{"case", "const1"}, {"n", f.dimension()}};
  if (std::holds_alternative<F::Const0>(form))
    return json{{"case", "const0"}, {"n", f.dimension()}};
  if (const auto* c2 = std::get_if<F::Case2>(&form))
    return json{{"case", "case2"},
                {"n", c2->n},
                {"index", c2->index},
                {"alpha", c2->alpha},
                {"signed", c2->sign_carrying}};
  if (const auto* c3 = std::get_if<F::Case3>(&form)) {
    std::vector<bool> sign(c3->sign_carrying.begin(), c3->sign_carrying.end());
    return json{{"case", "case3"},
                {"n", c3->n},
                {"indices", c3->indices},
                {"alphas", c3->alphas},
                {"signed", sign}};
  }
  const auto& l = std::get<prodrule::ExplicitLattice>(form);
  return json{{"case", "lattice"}, {"n", l.n}, {"ones", l.one_sets()}};
}

json run_hardy(const HardyScenario& s) {
  hardy::Optics optics{s.bs2_plus_present, s.bs2_minus_present};
  hardy::HardyState h = hardy::evolve_to(s.stage, optics);
  json amplitudes = json::object();
  json probabilities = json::object();
  for (std::size_t i = 0; i < h.state.basis().size(); ++i) {
    const auto& name = h.state.basis().label(i).name;
    const auto& a = h.state.amplitudes()[i];
    amplitudes[name] = json{{"re", a.real()}, {"im", a.imag()}};
    probabilities[name] = std::norm(a);
  }
  json out{{"kind", "hardy"},
           {"scenario", envelope("hardy", hardy_to_body(s))},
           {"stage", hardy::stage_name(s.stage)},
           {"amplitudes", std::move(amplitudes)},
           {"probabilities", std::move(probabilities)}};
  if (!s.outcome.empty()) {
    std::vector<statespace::ModeLabel> ls;
    for (const auto& name : s.outcome) {
      statespace::ModeLabel l{name};
      if (!h.state.basis().contains(l))
        throw ScenarioError("outcome label '" + name +
                            "' is not in the stage basis");
      ls.push_back(l);
    }
    double p = hardy::outcome_probability(
        s.stage, statespace::Projector::onto_labels(h.state.basis(), ls),
        optics);
    out["outcome"] = json{{"labels", s.outcome}, {"probability", p}};
  }
  return out;
}

json run_abl(const AblScenario& s) {
  auto maps = hardy::build_stage_maps();
  statespace::StateVector pre = hardy::evolve_to(s.pre_stage).state;

  statespace::Basis final_basis = hardy::stage_basis(hardy::Stage::AfterBoth);
  statespace::ModeLabel outcome_label{s.post_outcome};
  if (!final_basis.contains(outcome_label))
    throw ScenarioError("post outcome '" + s.post_outcome +
                        "' is not a final-stage mode");
  statespace::StateVector post_final =
      statespace::StateVector::basis_state(final_basis, outcome_label);

  std::vector<statespace::LinearMap> forward;
  switch (s.pre_stage) {
    case hardy::Stage::Initial:
      forward = {maps.bs1, maps.annihilation, maps.bs2_both};
      break;
    case hardy::Stage::AfterP:
      forward = {maps.bs2_both};
      break;
    case hardy::Stage::AfterBS2Minus:
      forward = {hardy::bs2_completion(hardy::Stage::AfterBS2Minus)};
      break;
    case hardy::Stage::AfterBS2Plus:
      forward = {hardy::bs2_completion(hardy::Stage::AfterBS2Plus)};
      break;
    case hardy::Stage::AfterBoth:
      break;
  }
  statespace::StateVector post = abl::back_evolve(post_final, forward);
  abl::PrePostEnsemble ensemble(pre, post);

  const statespace::Basis& basis = pre.basis();
  std::vector<abl::LabeledObservable> observables;
  for (const auto& o : s.observables)
    observables.push_back({o.name, resolve_observable(o, basis)});

  json probabilities = json::object();
  for (const auto& o : observables)
    probabilities[o.label] = abl_probability(
        ensemble, abl::ProjectorFamily::yes_no(o.projector), 0);

  json out{{"kind", "abl"},
           {"scenario", envelope("abl", abl_to_body(s))},
           {"probabilities", std::move(probabilities)}};

  if (s.counterfactual) {
    abl::RealityAssignment assignment =
        abl::assign_elements(ensemble, observables);
    json values = json::object();
    for (const auto& [name, value] : assignment.values())
      values[name] = value;
    abl::AuditReport audit = abl::audit_product_rule(assignment, s.pairs);
    json violations = json::array();
    for (const auto& v : audit.violations)
      violations.push_back(json{{"a", v.pair.a},
                                {"b", v.pair.b},
                                {"ab", v.pair.ab},
                                {"f_a", v.f_a},
                                {"f_b", v.f_b},
                                {"f_ab", v.f_ab}});
    out["assignment"] = std::move(values);
    out["violations"] = std::move(violations);
    out["skipped"] = audit.skipped;
  } else {
    out["assignment"] = nullptr;
    out["note"] =
        "counterfactual use of the pre/post rule is disabled; set "
        "counterfactual: true to attribute elements of reality to "
        "unperformed measurements";
  }
  return out;
}

json run_causal(const CausalScenario& input,
                std::optional<std::string> region_filter) {
  CausalScenario s = input;
  if (s.queries.empty()) {
    s.queries.push_back(s.layout.d_plus);
    s.queries.push_back(s.layout.d_minus);
  }
  const causal::Scenario& layout = s.layout;
  std::vector<causal::SpacetimeEvent> boxes{layout.u_plus_box,
                                            layout.u_minus_box};
  causal::CausalRegion union_region =
      causal::nonlocal_region(causal::Combine::Union, boxes);
  causal::CausalRegion intersection_region =
      causal::nonlocal_region(causal::Combine::Intersection, boxes);

  bool have_hk = !s.preparation_events.empty() || !s.collapse_events.empty();
  std::optional<causal::CausalRegion> hk;
  if (have_hk)
    hk = causal::hellwig_kraus_validity(s.preparation_events,
                                        s.collapse_events);

  json memberships = json::object();
  for (const auto& q : s.queries) {
    json entry{{"outside_forward_cone_of_u_plus_box",
                causal::CausalRegion::forward_exterior(layout.u_plus_box)
                    .contains(q)},
               {"outside_forward_cone_of_u_minus_box",
                causal::CausalRegion::forward_exterior(layout.u_minus_box)
                    .contains(q)}};
    if (!region_filter || *region_filter == "union")
      entry["in_union"] = union_region.contains(q);
    if (!region_filter || *region_filter == "intersection")
      entry["in_intersection"] = intersection_region.contains(q);
    if (hk) entry["in_pre_collapse_region"] = hk->contains(q);
    memberships[event_key(q)] = std::move(entry);
  }

  json orderings = json::object();
  for (double beta : layout.boosts) {
    causal::LorentzBoost b(beta);
    std::vector<causal::SpacetimeEvent> events = layout.events();
    std::vector<std::pair<double, std::string>> ordered;
    for (const auto& e : events) {
      ordered.emplace_back(causal::boost(b, e).t, e.label);
    }
    std::sort(ordered.begin(), ordered.end());
    json names = json::array();
    for (const auto& [t, name] : ordered) names.push_back(name);
    orderings["beta=" + fmt12(beta)] = std::move(names);
  }

  std::vector<causal::SpacetimeEvent> d_plus_info{layout.d_plus};
  std::vector<causal::SpacetimeEvent> d_minus_info{layout.d_minus};
  json er1 = json::object();
  for (double beta : layout.boosts) {
    causal::LorentzBoost frame(beta);
    er1["beta=" + fmt12(beta)] =
        json{{"U+", causal::er_criterion(causal::ErKind::ER1, d_minus_info,
                                         layout.bs2_plus, frame)},
             {"U-", causal::er_criterion(causal::ErKind::ER1, d_plus_info,
                                         layout.bs2_minus, frame)}};
  }
  json er2{{"U+", causal::er_criterion(causal::ErKind::ER2, d_minus_info,
                                       layout.u_plus_box)},
           {"U-", causal::er_criterion(causal::ErKind::ER2, d_plus_info,
                                       layout.u_minus_box)}};
  json er3{{"U+", causal::er_criterion(causal::ErKind::ER3, d_minus_info,
                                       layout.u_plus_box)},
           {"U-", causal::er_criterion(causal::ErKind::ER3, d_plus_info,
                                       layout.u_minus_box)}};

  json joint{{"both_detectors_in_union",
              union_region.contains(layout.d_plus) &&
                  union_region.contains(layout.d_minus)},
             {"both_detectors_in_intersection",
              intersection_region.contains(layout.d_plus) &&
                  intersection_region.contains(layout.d_minus)}};

  return json{{"kind", "causal"},
              {"scenario", envelope("causal", causal_to_body(s))},
              {"memberships", std::move(memberships)},
              {"orderings", std::move(orderings)},
              {"er_verdicts", json{{"er1", std::move(er1)},
                                   {"er2", std::move(er2)},
                                   {"er3", std::move(er3)},
                                   {"joint", std::move(joint)}}}};
}

namespace {

json lattice_summary(const prodrule::ExplicitLattice& l) {
  std::size_t count = 0;
  for (bool v : l.ones) count += v ? 1 : 0;
  json entry{{"ones", l.one_sets()}};
  if (count == l.ones.size()) {
    entry["kind"] = "constant_one";
  } else if (count == 0) {
    entry["kind"] = "constant_zero";
  } else {
    std::uint32_t generator = ~0u;
    for (std::uint32_t mask = 0; mask < l.ones.size(); ++mask)
      if (l.ones[mask]) generator &= mask;
    entry["kind"] = "principal_filter";
    entry["generator"] =
        prodrule::DiagonalProjector{l.n, generator}.indices();
  }
  return entry;
}

}  // namespace

json run_prodrule(const ProdruleScenario& s, const RunOptions& opts) {
  json out{{"kind", "prodrule"}, {"command", s.command}};
  if (s.command == "enumerate") {
    auto assignments = prodrule::enumerate_lattice_assignments(s.n);
    json list = json::array();
    for (const auto& l : assignments) list.push_back(lattice_summary(l));
    out["n"] = s.n;
    out["count"] = assignments.size();
    out["assignments"] = std::move(list);
    return out;
  }

  prodrule::ProductRuleFunction f = function_from_json(*s.function);
  out["function"] = function_to_json(f);
  if (s.command == "check") {
    std::uint64_t seed = s.seed.value_or(opts.seed);
    prodrule::TrialReport report = prodrule::random_product_rule_trials(
        f, s.trials, seed, opts.prodrule_tolerance);
    out["trials"] = report.trials;
    out["seed"] = report.seed;
    out["failures"] = report.failures;
    out["tolerance"] = opts.prodrule_tolerance;
    out["passed"] = report.failures == 0;
    return out;
  }

  // classify
  prodrule::CaseReport report =
      prodrule::classify_on_projectors(f, f.dimension());
  out["case"] = prodrule::case_kind_name(report.kind);
  out["one_singletons"] = report.one_singletons;
  json minimal = json::array();
  for (const auto& p : report.minimal_ones) minimal.push_back(p.indices());
  out["minimal_one_projectors"] = std::move(minimal);
  return out;
}

json run_demo(const std::string& narrative, const RunOptions& opts) {
  json out{{"kind", "demo"}, {"narrative", narrative}};

  HardyScenario final_scenario;
  json final_run = run_hardy(final_scenario);

  AblScenario vaidman;
  vaidman.counterfactual = true;
  json vaidman_run = run_abl(vaidman);

  out["final_amplitudes"] = final_run["amplitudes"];
  statespace::Basis fb = hardy::stage_basis(hardy::Stage::AfterBoth);
  out["coincidence_probability"] = hardy::outcome_probability(
      hardy::Stage::AfterBoth,
      statespace::Projector::onto_labels(fb,
                                         {statespace::ModeLabel{"d+d-"}}));
  out["abl_triple"] = vaidman_run["probabilities"];
  out["product_rule_violations"] = vaidman_run["violations"];

  if (narrative == "hardy-paradox") return out;

  // the full run: stage states, the projection-free certainties, the causal
  // verdicts and the appendix classification
  json stages = json::object();
  for (hardy::Stage st :
       {hardy::Stage::AfterP, hardy::Stage::AfterBS2Minus,
        hardy::Stage::AfterBS2Plus, hardy::Stage::AfterBoth}) {
    HardyScenario hs;
    hs.stage = st;
    stages[hardy::stage_name(st)] = run_hardy(hs)["amplitudes"];
  }
  out["stages"] = std::move(stages);

  statespace::Basis plus_basis = hardy::stage_basis(hardy::Stage::AfterBS2Plus);
  statespace::Basis minus_basis =
      hardy::stage_basis(hardy::Stage::AfterBS2Minus);
  out["conditional_certainties"] =
      json{{"P(U-=1 | D+=1) at after_bs2_plus",
            hardy::conditional_probability(hardy::Stage::AfterBS2Plus,
                                           hardy::u_minus(plus_basis),
                                           hardy::d_plus(plus_basis))},
           {"P(U+=1 | D-=1) at after_bs2_minus",
            hardy::conditional_probability(hardy::Stage::AfterBS2Minus,
                                           hardy::u_plus(minus_basis),
                                           hardy::d_minus(minus_basis))}};

  out["vaidman"] = std::move(vaidman_run);
  out["causal"] = run_causal(CausalScenario{});

  // frame-to-frame comparison: cone-based assignments agree everywhere,
  // constant-time assignments do not even exist in every frame
  {
    causal::Scenario layout = causal::Scenario::default_hardy();
    std::vector<causal::SpacetimeEvent> d_plus_info{layout.d_plus};
    std::vector<causal::SpacetimeEvent> d_minus_info{layout.d_minus};
    const std::vector<std::pair<std::string, double>> frames{
        {"F", 0.0}, {"F+", 0.6}, {"F-", -0.6}};

    double certain_plus = hardy::conditional_probability(
        hardy::Stage::AfterBS2Minus,
        hardy::u_plus(hardy::stage_basis(hardy::Stage::AfterBS2Minus)),
        hardy::d_minus(hardy::stage_basis(hardy::Stage::AfterBS2Minus)));
    double certain_minus = hardy::conditional_probability(
        hardy::Stage::AfterBS2Plus,
        hardy::u_minus(hardy::stage_basis(hardy::Stage::AfterBS2Plus)),
        hardy::d_plus(hardy::stage_basis(hardy::Stage::AfterBS2Plus)));

    auto assignments_for = [&](causal::ErKind kind) {
      std::map<std::string, abl::RealityAssignment> per_frame;
      for (const auto& [name, beta] : frames) {
        causal::LorentzBoost frame(beta);
        abl::RealityAssignment a;
        if (certain_plus == 1.0 &&
            causal::er_criterion(kind, d_minus_info,
                                 kind == causal::ErKind::ER1
                                     ? layout.bs2_plus
                                     : layout.u_plus_box,
                                 frame))
          a.set("U+", 1.0);
        if (certain_minus == 1.0 &&
            causal::er_criterion(kind, d_plus_info,
                                 kind == causal::ErKind::ER1
                                     ? layout.bs2_minus
                                     : layout.u_minus_box,
                                 frame))
          a.set("U-", 1.0);
        per_frame[name] = std::move(a);
      }
      return per_frame;
    };

    json li1 = json::object();
    auto er3_frames = assignments_for(causal::ErKind::ER3);
    li1["er3_based"] =
        json{{"U+", causal::li1_check(er3_frames, "U+")},
             {"U-", causal::li1_check(er3_frames, "U-")}};
    auto er1_frames = assignments_for(causal::ErKind::ER1);
    json er1_report = json::object();
    for (const char* obs : {"U+", "U-"}) {
      try {
        er1_report[obs] = causal::li1_check(er1_frames, obs);
      } catch (const DomainError& e) {
        er1_report[obs] = e.what();
      }
    }
    li1["er1_based"] = std::move(er1_report);
    out["li1"] = std::move(li1);
  }

  // two-particle preparation verified at (-eps, +-L), left-side collapse at
  // (t0, -L): the far verification point keeps the prepared state as long as
  // t0 + eps < 2L
  {
    const double eps = 0.1, big_l = 1.0, t0 = 0.5;
    std::vector<causal::SpacetimeEvent> prep{{-eps, -big_l, "check_left"},
                                             {-eps, big_l, "check_right"}};
    std::vector<causal::SpacetimeEvent> collapse{{t0, -big_l, "z_measure"}};
    causal::CausalRegion region =
        causal::hellwig_kraus_validity(prep, collapse);
    out["pre_collapse_region"] =
        json{{"preparation", json::array({json::array({-eps, -big_l}),
                                          json::array({-eps, big_l})})},
             {"collapse", json::array({json::array({t0, -big_l})})},
             {"far_check_point_keeps_state",
              region.contains({-eps, big_l, ""})},
             {"near_check_point_keeps_state",
              region.contains({-eps, -big_l, ""})}};
  }

  json appendix = json::object();
  json counts = json::object();
  for (std::size_t n : {3u, 4u, 5u})
    counts[std::to_string(n)] = prodrule::enumerate_lattice_assignments(n).size();
  appendix["assignment_counts"] = std::move(counts);
  json uniqueness = json::object();
  for (std::size_t n : {3u, 4u, 5u})
    uniqueness[std::to_string(n)] = prodrule::uniqueness_theorem_check(n);
  appendix["uniqueness"] = std::move(uniqueness);
  ProdruleScenario enumerate3{"enumerate", 3, std::nullopt, 0, std::nullopt};
  appendix["n3_assignments"] = run_prodrule(enumerate3, opts)["assignments"];
  out["appendix"] = std::move(appendix);
  return out;
}

namespace {

void print_amplitude_table(const json& amplitudes, const json* probabilities) {
  for (const auto& [label, a] : amplitudes.items()) {
    std::string amp = fmt_complex(a["re"].get<double>(),
                                  a["im"].get<double>());
    std::printf("  %-6s %-22s", label.c_str(), amp.c_str());
    if (probabilities && probabilities->contains(label))
      std::printf("  p = %s",
                  fmt12((*probabilities)[label].get<double>()).c_str());
    std::printf("\n");
  }
}

}  // namespace

void render_hardy(const json& result) {
  std::printf("stage: %s\n", result["stage"].get<std::string>().c_str());
  std::printf("amplitudes:\n");
  print_amplitude_table(result["amplitudes"], &result["probabilities"]);
  if (result.contains("outcome")) {
    std::string labels;
    for (const auto& l : result["outcome"]["labels"])
      labels += (labels.empty() ? "" : ", ") + l.get<std::string>();
    std::printf("outcome {%s}: probability %s\n", labels.c_str(),
                fmt12(result["outcome"]["probability"].get<double>()).c_str());
  }
}

void render_abl(const json& result) {
  const json& scenario = result["scenario"]["body"];
  std::printf("pre stage: %s   post outcome: %s   counterfactual: %s\n",
              scenario["pre_stage"].get<std::string>().c_str(),
              scenario["post_outcome"].get<std::string>().c_str(),
              scenario["counterfactual"].get<bool>() ? "yes" : "no");
  std::printf("pre/post probabilities (P -> 1):\n");
  for (const auto& [name, p] : result["probabilities"].items())
    std::printf("  %-6s %s\n", name.c_str(), fmt12(p.get<double>()).c_str());
  if (result["assignment"].is_null()) {
    std::printf("%s\n", result["note"].get<std::string>().c_str());
    return;
  }
  std::printf("elements of reality:");
  for (const auto& [name, v] : result["assignment"].items())
    std::printf("  f(%s) = %s", name.c_str(), fmt12(v.get<double>()).c_str());
  std::printf("\n");
  if (result["violations"].empty()) {
    std::printf("product rule: no violations\n");
  } else {
    for (const auto& v : result["violations"])
      std::printf(
          "product rule: VIOLATION  f(%s) f(%s) = %s but f(%s) = %s\n",
          v["a"].get<std::string>().c_str(),
          v["b"].get<std::string>().c_str(),
          fmt12(v["f_a"].get<double>() * v["f_b"].get<double>()).c_str(),
          v["ab"].get<std::string>().c_str(),
          fmt12(v["f_ab"].get<double>()).c_str());
  }
  for (const auto& s : result["skipped"])
    std::printf("skipped: %s\n", s.get<std::string>().c_str());
}

void render_causal(const json& result) {
  const json& events = result["scenario"]["body"]["events"];
  std::printf("events (t, x):\n");
  for (const auto& [name, e] : events.items())
    std::printf("  %-12s (%s, %s)\n", name.c_str(),
                fmt12(e[0].get<double>()).c_str(),
                fmt12(e[1].get<double>()).c_str());
  std::printf("orderings by frame:\n");
  for (const auto& [beta, names] : result["orderings"].items()) {
    std::printf("  %-12s", beta.c_str());
    for (const auto& n : names) std::printf(" %s", n.get<std::string>().c_str());
    std::printf("\n");
  }
  std::printf("memberships:\n");
  for (const auto& [point, entry] : result["memberships"].items()) {
    std::printf("  %s:", point.c_str());
    for (const auto& [field, value] : entry.items())
      std::printf(" %s=%s", field.c_str(), value.get<bool>() ? "yes" : "no");
    std::printf("\n");
  }
  const json& er = result["er_verdicts"];
  std::printf("ER1 (constant-time prediction, frame-dependent):\n");
  for (const auto& [beta, verdicts] : er["er1"].items())
    std::printf("  %-12s U+: %-3s U-: %s\n", beta.c_str(),
                verdicts["U+"].get<bool>() ? "yes" : "no",
                verdicts["U-"].get<bool>() ? "yes" : "no");
  std::printf("ER2 (backward cone): U+: %s  U-: %s\n",
              er["er2"]["U+"].get<bool>() ? "yes" : "no",
              er["er2"]["U-"].get<bool>() ? "yes" : "no");
  std::printf("ER3 (outside forward cone): U+: %s  U-: %s\n",
              er["er3"]["U+"].get<bool>() ? "yes" : "no",
              er["er3"]["U-"].get<bool>() ? "yes" : "no");
  std::printf("joint observable: union covers both detectors: %s, "
              "intersection covers both: %s\n",
              er["joint"]["both_detectors_in_union"].get<bool>() ? "yes"
                                                                 : "no",
              er["joint"]["both_detectors_in_intersection"].get<bool>()
                  ? "yes"
                  : "no");
}

void render_prodrule(const json& result) {
  std::string command = result["command"].get<std::string>();
  if (command == "enumerate") {
    std::printf("n = %zu: %zu product-closed assignments\n",
                result["n"].get<std::size_t>(),
                result["count"].get<std::size_t>());
    for (const auto& a : result["assignments"]) {
      std::string kind = a["kind"].get<std::string>();
      std::printf("  %-16s", kind.c_str());
      if (a.contains("generator")) {
        std::printf(" generator {");
        bool first = true;
        for (const auto& i : a["generator"]) {
          std::printf("%s%zu", first ? "" : ",", i.get<std::size_t>());
          first = false;
        }
        std::printf("}");
      }
      std::printf("\n");
    }
    return;
  }
  if (command == "check") {
    std::printf("function: %s\n", result["function"].dump().c_str());
    std::printf("%zu trials, seed %llu, tolerance %s: %s (%zu failures)\n",
                result["trials"].get<std::size_t>(),
                static_cast<unsigned long long>(
                    result["seed"].get<std::uint64_t>()),
                fmt12(result["tolerance"].get<double>()).c_str(),
                result["passed"].get<bool>() ? "PASS" : "FAIL",
                result["failures"].get<std::size_t>());
    return;
  }
  std::printf("function: %s\n", result["function"].dump().c_str());
  std::printf("case: %s\n", result["case"].get<std::string>().c_str());
  std::printf("rank-1 projectors with f = 1: {");
  bool first = true;
  for (const auto& i : result["one_singletons"]) {
    std::printf("%s%zu", first ? "" : ",", i.get<std::size_t>());
    first = false;
  }
  std::printf("}\n");
  std::printf("minimal projectors with f = 1:");
  for (const auto& p : result["minimal_one_projectors"]) {
    std::printf(" {");
    first = true;
    for (const auto& i : p) {
      std::printf("%s%zu", first ? "" : ",", i.get<std::size_t>());
      first = false;
    }
    std::printf("}");
  }
  std::printf("\n");
}

void render_demo(const json& result) {
  std::printf("== final state ==\n");
  print_amplitude_table(result["final_amplitudes"], nullptr);
  std::printf("P(D+ and D-) = %s  (= 1/16)\n",
              fmt12(result["coincidence_probability"].get<double>()).c_str());
  std::printf("\n== pre/post probabilities with both detectors firing ==\n");
  for (const auto& [name, p] : result["abl_triple"].items())
    std::printf("  P(%s -> 1) = %s\n", name.c_str(),
                fmt12(p.get<double>()).c_str());
  for (const auto& v : result["product_rule_violations"])
    std::printf("product rule: VIOLATION  f(%s) f(%s) = %s but f(%s) = %s\n",
                v["a"].get<std::string>().c_str(),
                v["b"].get<std::string>().c_str(),
                fmt12(v["f_a"].get<double>() * v["f_b"].get<double>()).c_str(),
                v["ab"].get<std::string>().c_str(),
                fmt12(v["f_ab"].get<double>()).c_str());

  if (result["narrative"] == "hardy-paradox") return;

  std::printf("\n== stage states ==\n");
  for (const auto& [stage, amplitudes] : result["stages"].items()) {
    std::printf("%s:\n", stage.c_str());
    print_amplitude_table(amplitudes, nullptr);
  }
  std::printf("\n== projection-free certainties ==\n");
  for (const auto& [name, p] : result["conditional_certainties"].items())
    std::printf("  %s = %s\n", name.c_str(), fmt12(p.get<double>()).c_str());
  std::printf("\n== causal structure ==\n");
  render_causal(result["causal"]);
  std::printf("\n== frame invariance of the assigned values ==\n");
  const json& li1 = result["li1"];
  for (const auto& [obs, v] : li1["er3_based"].items())
    std::printf("  cone-based f(%s): %s\n", obs.c_str(),
                v.get<bool>() ? "same value in F, F+, F-" : "FRAME-DEPENDENT");
  for (const auto& [obs, v] : li1["er1_based"].items()) {
    if (v.is_boolean())
      std::printf("  constant-time f(%s): %s\n", obs.c_str(),
                  v.get<bool>() ? "same value in F, F+, F-"
                                : "FRAME-DEPENDENT");
    else
      std::printf("  constant-time f(%s): %s\n", obs.c_str(),
                  v.get<std::string>().c_str());
  }
  std::printf("\n== collapse along the backward cone ==\n");
  const json& hk = result["pre_collapse_region"];
  std::printf("  far-side verification point keeps the prepared state: %s\n",
              hk["far_check_point_keeps_state"].get<bool>() ? "yes" : "no");
  std::printf("  point in the measurement's backward cone keeps it: %s\n",
              hk["near_check_point_keeps_state"].get<bool>() ? "yes" : "no");
  std::printf("\n== product-rule functions on the projector lattice ==\n");
  const json& appendix = result["appendix"];
  for (const auto& [n, count] : appendix["assignment_counts"].items())
    std::printf("  n = %s: %zu assignments, uniqueness check %s\n", n.c_str(),
                count.get<std::size_t>(),
                appendix["uniqueness"][n].get<bool>() ? "pass" : "FAIL");
}

}  // namespace hardylab::cli
