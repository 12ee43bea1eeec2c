#include <sstream>

#include "infoplan/error.hpp"
#include "infoplan/serialize.hpp"

namespace infoplan {

namespace {

Json distance_json(Distance d) { return d.finite() ? Json(d.value()) : Json(nullptr); }

Json letter_atoms(const AtomSet& ap, Letter l) {
  Json out = Json::array();
  for (std::size_t i = 0; i < ap.size(); ++i) {
    if (l.has(i)) out.push_back(ap.name(i));
  }
  return out;
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' has the wrong type");
  }
}

std::string escape_dot(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Json to_json(const Fsa& fsa) {
  const AtomSet& ap = fsa.atoms();
  Json states = Json::array();
  Json edges = Json::array();
  for (Fsa::State s = 0; s < fsa.state_count(); ++s) {
    states.push_back({{"id", s}, {"label", fsa.label(s)}, {"accepting", fsa.accepting(s)}});
    for (std::uint32_t bits = 0; bits < ap.letter_count(); ++bits) {
      const Letter l(bits);
      edges.push_back({{"from", s}, {"letter", bits}, {"atoms", letter_atoms(ap, l)}, {"to", fsa.step(s, l)}});
    }
  }
  return {{"atoms", ap.names()}, {"initial", fsa.initial()}, {"states", states}, {"transitions", edges}};
}

Json to_json(const TransitionSystem& ts) {
  Json regions = Json::array();
  for (Region q = 0; q < ts.region_count(); ++q) {
    regions.push_back({{"name", ts.region_name(q)}, {"label", letter_atoms(ts.atoms(), ts.label(q))}});
  }
  Json transitions = Json::array();
  for (const auto& t : ts.transitions()) {
    transitions.push_back(
        {{"from", t.from}, {"action", ts.actions()[t.action]}, {"to", t.to}, {"weight", t.weight}});
  }
  Json links = Json::array();
  for (const auto& [key, d] : ts.measurement_links()) {
    if (key.first == key.second) continue;
    links.push_back({{"a", key.first}, {"b", key.second}, {"distance", d}});
  }
  return {{"atoms", ts.atoms().names()},
          {"initial", ts.initial()},
          {"regions", regions},
          {"transitions", transitions},
          {"measurement", links}};
}

TransitionSystem transition_system_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "transition system must be an object");
  const AtomSet ap(field<std::vector<std::string>>(j, "atoms"));
  if (!j.contains("regions")) throw Error(ErrorCode::InvalidArgument, "missing field 'regions'");
  const Json& regions = j.at("regions");
  if (!regions.is_array()) throw Error(ErrorCode::InvalidArgument, "'regions' must be an array");
  TransitionSystem ts(ap, regions.size(), field<Region>(j, "initial"));
  for (Region q = 0; q < regions.size(); ++q) {
    const Json& r = regions[q];
    if (r.contains("name")) ts.set_region_name(q, field<std::string>(r, "name"));
    if (r.contains("label")) ts.set_label(q, make_letter(ap, field<std::vector<std::string>>(r, "label")));
  }
  for (const Json& t : j.value("transitions", Json::array())) {
    ts.add_transition(field<Region>(t, "from"), field<std::string>(t, "action"), field<Region>(t, "to"),
                      t.contains("weight") ? field<double>(t, "weight") : 1.0);
  }
  for (const Json& m : j.value("measurement", Json::array())) {
    ts.set_measurement_distance(field<Region>(m, "a"), field<Region>(m, "b"), field<double>(m, "distance"));
  }
  ts.validate();
  return ts;
}

Json to_json(const ProductAutomaton& p) {
  const auto& ts = p.transition_system();
  Json states = Json::array();
  Json edges = Json::array();
  for (ProductState s = 0; s < p.state_count(); ++s) {
    Json st = {{"id", s},
               {"region", p.region(s)},
               {"automaton", p.automaton_state(s)},
               {"accepting", p.accepting(s)}};
    if (p.target()) st["potential"] = distance_json(p.potential(s));
    states.push_back(std::move(st));
    for (const auto& e : p.successors(s)) {
      edges.push_back({{"from", s}, {"to", e.to}, {"action", ts.actions()[e.action]}, {"weight", e.weight}});
    }
  }
  Json out = {{"initial", p.initial()}, {"states", states}, {"edges", edges}};
  out["target"] = p.target() ? Json(*p.target()) : Json(nullptr);
  return out;
}

Json to_json(const Belief& b) {
  Json out = {{"mode", b.mode() == Belief::Mode::Joint ? "joint" : "factored"},
              {"marginals", b.marginals()},
              {"entropy_bits", belief_entropy(b)}};
  if (b.mode() == Belief::Mode::Joint) {
    const auto p = b.joint_pmf().probabilities();
    out["pmf"] = std::vector<double>(p.begin(), p.end());
  }
  return out;
}

Json to_json(const SensorModel& m) {
  Json hoods = Json::array();
  for (const auto& n : m.neighborhoods) {
    Json links = Json::array();
    for (const auto& l : n) links.push_back({{"region", l.region}, {"distance", l.distance}});
    hoods.push_back(std::move(links));
  }
  return {{"mu0", m.peak_detection}, {"lambda", m.decay}, {"false_alarm", m.false_alarm}, {"neighborhoods", hoods}};
}

Json to_json(const Trace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"time", s.time},
                     {"region", s.region},
                     {"state", s.state},
                     {"report", s.report ? 1 : 0},
                     {"entropy_bits", s.entropy_bits},
                     {"potential", distance_json(s.potential)},
                     {"candidates", s.candidates},
                     {"feasible", s.feasible},
                     {"expected_bits", s.expected_bits},
                     {"trajectory", s.trajectory}});
  }
  return {{"initial_entropy_bits", t.initial_entropy_bits},
          {"terminal_entropy_bits", t.terminal_entropy_bits},
          {"reached_target", t.reached_target},
          {"steps", steps}};
}

Json to_json(const ExhaustiveResult& r) {
  return {{"runs_evaluated", r.runs_evaluated},
          {"expected_bits", r.expected_bits},
          {"states", r.run.states},
          {"regions", r.run.regions}};
}

Json to_json(const StatsReport& r, bool with_traces) {
  Json out = {{"trials", r.trials.size()},
              {"mean_bits", r.mean},
              {"median_bits", r.median},
              {"variance_bits2", r.variance},
              {"min_bits", r.min},
              {"max_bits", r.max},
              {"satisfaction_rate", r.satisfaction_rate},
              {"rejected_instances", r.rejected_instances}};
  out["planned_bits"] = r.planned_bits ? Json(*r.planned_bits) : Json(nullptr);
  Json bins = Json::array();
  for (const auto& b : r.histogram) bins.push_back({{"low", b.low}, {"high", b.high}, {"count", b.count}});
  out["histogram"] = bins;
  if (with_traces) {
    Json traces = Json::array();
    for (const auto& t : r.trials) {
      traces.push_back({{"trial", t.trial},
                        {"seed", t.seed},
                        {"satisfied", t.satisfied},
                        {"steps", t.steps},
                        {"trace", to_json(t.trace)}});
    }
    out["traces"] = traces;
  }
  return out;
}

std::string to_dot(const ProductAutomaton& p) {
  const auto& ts = p.transition_system();
  std::ostringstream os;
  os << "digraph product {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (ProductState s = 0; s < p.state_count(); ++s) {
    std::string w = "-";
    if (p.target()) {
      const Distance d = p.potential(s);
      w = d.finite() ? format_double(d.value(), 3) : "inf";
    }
    os << "  s" << s << " [label=\"" << escape_dot(ts.region_name(p.region(s))) << ","
       << p.automaton_state(s) << "\\nW=" << w << "\"";
    if (p.accepting(s)) os << ", shape=doublecircle";
    if (p.target() && *p.target() == s) os << ", style=bold";
    os << "];\n";
  }
  os << "  init [shape=point];\n  init -> s" << p.initial() << ";\n";
  for (ProductState s = 0; s < p.state_count(); ++s) {
    for (const auto& e : p.successors(s)) {
      os << "  s" << s << " -> s" << e.to << " [label=\"" << escape_dot(ts.actions()[e.action]) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace infoplan
