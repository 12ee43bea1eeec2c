#pragma once

// JSON and DOT renderings of the planning objects, and the experiment
// configuration format.

#include <string>
#include <string_view>

#include <json.hpp>

#include "infoplan/belief.hpp"
#include "infoplan/graph_model.hpp"
#include "infoplan/planners.hpp"
#include "infoplan/scltl.hpp"
#include "infoplan/simkit.hpp"

namespace infoplan {

using Json = nlohmann::ordered_json;

Json to_json(const Fsa& fsa);
Json to_json(const TransitionSystem& ts);
/// Throws InvalidArgument on a malformed document.
TransitionSystem transition_system_from_json(const Json& j);
Json to_json(const ProductAutomaton& p);
Json to_json(const Belief& b);
Json to_json(const SensorModel& m);
Json to_json(const Trace& t);
Json to_json(const ExhaustiveResult& r);
/// Summary statistics; traces are included when `with_traces` is set.
Json to_json(const StatsReport& r, bool with_traces);

/// Graphviz rendering of the product with W annotations.
std::string to_dot(const ProductAutomaton& p);

/// Parses the experiment configuration document. Unknown keys are rejected.
/// Throws Parse on invalid JSON and InvalidArgument on schema violations.
ExperimentConfig parse_experiment_config(std::string_view text);
Json to_json(const ExperimentConfig& cfg);

}  // namespace infoplan
