#include <set>

#include "infoplan/error.hpp"
#include "infoplan/serialize.hpp"

namespace infoplan {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::InvalidArgument, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read_optional(const Json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

Belief::Mode parse_belief_mode(const std::string& s) {
  if (s == "factored") return Belief::Mode::Factored;
  if (s == "joint") return Belief::Mode::Joint;
  throw Error(ErrorCode::InvalidArgument, "belief mode must be 'factored' or 'joint'");
}

PlannerMode parse_planner_mode(const std::string& s) {
  if (s == "rhc") return PlannerMode::Rhc;
  if (s == "exhaustive") return PlannerMode::Exhaustive;
  throw Error(ErrorCode::InvalidArgument, "planner mode must be 'rhc' or 'exhaustive'");
}

ExperimentConfig from_document(const Json& doc) {
  reject_unknown(doc,
                 {"grid", "labels", "goal_atom", "atoms", "formula", "sensor", "prior",
                  "truth_probability", "measurement_distance", "belief", "planner", "trials", "seed",
                  "resample_instance", "max_redraws", "timing", "transition_system"},
                 "config");
  ExperimentConfig cfg;
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    reject_unknown(g, {"width", "height", "start", "goal"}, "grid");
    read(g, "width", cfg.width);
    read(g, "height", cfg.height);
    read_optional(g, "start", cfg.start);
    read_optional(g, "goal", cfg.goal);
  }
  if (doc.contains("labels")) {
    const Json& l = doc.at("labels");
    reject_unknown(l, {"counts", "fixed"}, "labels");
    if (l.contains("counts")) {
      cfg.label_counts.clear();
      for (const auto& [atom, n] : l.at("counts").items()) cfg.label_counts.push_back({atom, n.get<std::size_t>()});
    }
    if (l.contains("fixed")) {
      for (const auto& [atom, regions] : l.at("fixed").items()) {
        cfg.fixed_labels.emplace_back(atom, regions.get<std::vector<Region>>());
      }
    }
  }
  read(doc, "goal_atom", cfg.goal_atom);
  read(doc, "atoms", cfg.atoms);
  read(doc, "formula", cfg.formula);
  if (doc.contains("sensor")) {
    const Json& s = doc.at("sensor");
    reject_unknown(s, {"mu0", "lambda", "false_alarm"}, "sensor");
    read(s, "mu0", cfg.peak_detection);
    read(s, "lambda", cfg.decay);
    read(s, "false_alarm", cfg.false_alarm);
  }
  read(doc, "prior", cfg.prior);
  read(doc, "truth_probability", cfg.truth_probability);
  if (doc.contains("measurement_distance")) {
    const auto range = doc.at("measurement_distance").get<std::vector<double>>();
    if (range.size() != 2) throw Error(ErrorCode::InvalidArgument, "measurement_distance must be [low, high]");
    cfg.distance_low = range[0];
    cfg.distance_high = range[1];
  }
  if (doc.contains("belief")) {
    const Json& b = doc.at("belief");
    reject_unknown(b, {"mode", "joint_cap"}, "belief");
    if (b.contains("mode")) cfg.belief_mode = parse_belief_mode(b.at("mode").get<std::string>());
    read(b, "joint_cap", cfg.joint_cap);
  }
  if (doc.contains("planner")) {
    const Json& p = doc.at("planner");
    reject_unknown(p, {"mode", "horizon", "exact_cap", "samples", "seed", "run_limit", "jobs"}, "planner");
    if (p.contains("mode")) cfg.planner = parse_planner_mode(p.at("mode").get<std::string>());
    read(p, "horizon", cfg.plan.horizon);
    read(p, "exact_cap", cfg.plan.exact_cap);
    read(p, "samples", cfg.plan.samples);
    read(p, "seed", cfg.plan.seed);
    read(p, "run_limit", cfg.plan.run_limit);
    read(p, "jobs", cfg.plan.jobs);
  }
  read(doc, "trials", cfg.trials);
  read(doc, "seed", cfg.seed);
  read(doc, "resample_instance", cfg.resample_instance);
  read(doc, "max_redraws", cfg.max_redraws);
  read(doc, "timing", cfg.timing);
  if (doc.contains("transition_system")) {
    cfg.transition_system = transition_system_from_json(doc.at("transition_system"));
    if (!(cfg.transition_system->atoms() == cfg.atom_set())) {
      throw Error(ErrorCode::InvalidArgument, "transition system atoms differ from the config atoms");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return from_document(doc);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config schema error: ") + e.what());
  }
}

Json to_json(const ExperimentConfig& cfg) {
  Json out;
  out["grid"] = {{"width", cfg.width}, {"height", cfg.height}};
  out["grid"]["start"] = cfg.start ? Json(*cfg.start) : Json(nullptr);
  out["grid"]["goal"] = cfg.goal ? Json(*cfg.goal) : Json(nullptr);
  Json counts = Json::object();
  for (const auto& lc : cfg.label_counts) counts[lc.atom] = lc.count;
  Json fixed = Json::object();
  for (const auto& [atom, regions] : cfg.fixed_labels) fixed[atom] = regions;
  out["labels"] = {{"counts", counts}, {"fixed", fixed}};
  out["goal_atom"] = cfg.goal_atom;
  out["atoms"] = cfg.atoms;
  out["formula"] = cfg.formula;
  out["sensor"] = {{"mu0", cfg.peak_detection}, {"lambda", cfg.decay}, {"false_alarm", cfg.false_alarm}};
  out["prior"] = cfg.prior;
  out["truth_probability"] = cfg.truth_probability;
  out["measurement_distance"] = {cfg.distance_low, cfg.distance_high};
  out["belief"] = {{"mode", cfg.belief_mode == Belief::Mode::Joint ? "joint" : "factored"},
                   {"joint_cap", cfg.joint_cap}};
  out["planner"] = {{"mode", cfg.planner == PlannerMode::Rhc ? "rhc" : "exhaustive"},
                    {"horizon", cfg.plan.horizon},
                    {"exact_cap", cfg.plan.exact_cap},
                    {"samples", cfg.plan.samples},
                    {"seed", cfg.plan.seed},
                    {"run_limit", cfg.plan.run_limit},
                    {"jobs", cfg.plan.jobs}};
  out["trials"] = cfg.trials;
  out["seed"] = cfg.seed;
  out["resample_instance"] = cfg.resample_instance;
  out["max_redraws"] = cfg.max_redraws;
  out["timing"] = cfg.timing;
  if (cfg.transition_system) out["transition_system"] = to_json(*cfg.transition_system);
  return out;
}

}  // namespace infoplan
