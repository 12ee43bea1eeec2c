#include "infoplan/infoplan.h"

#include <new>
#include <string>
#include <vector>

#include "infoplan/error.hpp"
#include "infoplan/serialize.hpp"

using namespace infoplan;

struct infoplan_automaton {
  AtomSet atoms;
  Formula formula;
  Fsa fsa;
  std::string dot;
  std::string json;
};

struct infoplan_experiment {
  ExperimentConfig config;
  std::string json;
};

struct infoplan_plan {
  SingleRun run;
  std::string json;
  std::string dot;
};

struct infoplan_study {
  StatsReport report;
  std::string trials_csv;
  std::string histogram_csv;
  std::string json;
};

namespace {

thread_local std::string last_error;

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Parse:
      return INFOPLAN_ERROR_USAGE;
    case ErrorCode::Infeasible:
      return INFOPLAN_ERROR_INFEASIBLE;
    case ErrorCode::InconsistentReport:
    case ErrorCode::Internal:
      return INFOPLAN_ERROR_INTERNAL;
  }
  return INFOPLAN_ERROR_INTERNAL;
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return INFOPLAN_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return INFOPLAN_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return INFOPLAN_ERROR_INTERNAL;
  }
}

int usage(const char* message) {
  last_error = message;
  return INFOPLAN_ERROR_USAGE;
}

std::vector<Letter> word_of(const uint32_t* letters, size_t length) {
  std::vector<Letter> word;
  word.reserve(length);
  for (size_t i = 0; i < length; ++i) word.emplace_back(letters[i]);
  return word;
}

}  // namespace

extern "C" {

const char* infoplan_version(void) { return "0.1.0"; }

const char* infoplan_last_error(void) { return last_error.c_str(); }

int infoplan_automaton_translate(const char* formula, const char* const* atoms, size_t atom_count,
                                 infoplan_automaton** out) {
  if (!formula || !out || (atom_count > 0 && !atoms)) return usage("null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> names;
    for (size_t i = 0; i < atom_count; ++i) {
      if (!atoms[i]) throw Error(ErrorCode::InvalidArgument, "null atom name");
      names.emplace_back(atoms[i]);
    }
    AtomSet ap(names);
    Formula f = parse_formula(formula, ap);
    Fsa fsa = translate(f, ap);
    std::string dot = to_dot(fsa);
    Json j = to_json(fsa);
    j["formula"] = to_string(f, ap);
    *out = new infoplan_automaton{std::move(ap), std::move(f), std::move(fsa), std::move(dot), j.dump(2) + "\n"};
  });
}

size_t infoplan_automaton_state_count(const infoplan_automaton* a) { return a ? a->fsa.state_count() : 0; }

int infoplan_automaton_accepts(const infoplan_automaton* a, const uint32_t* letters, size_t length,
                               int* accepted) {
  if (!a || !accepted || (length > 0 && !letters)) return usage("null argument");
  return guarded([&] {
    for (size_t i = 0; i < length; ++i) {
      if (letters[i] >= a->atoms.letter_count()) throw Error(ErrorCode::InvalidArgument, "letter uses undeclared atoms");
    }
    *accepted = a->fsa.accepts(word_of(letters, length)) ? 1 : 0;
  });
}

int infoplan_automaton_formula_holds(const infoplan_automaton* a, const uint32_t* letters, size_t length,
                                     int* holds) {
  if (!a || !holds || (length > 0 && !letters)) return usage("null argument");
  return guarded([&] { *holds = word_satisfies(a->formula, word_of(letters, length)) ? 1 : 0; });
}

const char* infoplan_automaton_dot(const infoplan_automaton* a) { return a ? a->dot.c_str() : ""; }
const char* infoplan_automaton_json(const infoplan_automaton* a) { return a ? a->json.c_str() : ""; }
void infoplan_automaton_free(infoplan_automaton* a) { delete a; }

int infoplan_experiment_load(const char* json_text, infoplan_experiment** out) {
  if (!out) return usage("null argument");
  *out = nullptr;
  return guarded([&] {
    ExperimentConfig cfg;
    if (json_text && *json_text) {
      cfg = parse_experiment_config(json_text);
    } else {
      cfg.validate();
    }
    *out = new infoplan_experiment{std::move(cfg), {}};
  });
}

int infoplan_experiment_set_seed(infoplan_experiment* e, uint64_t seed) {
  if (!e) return usage("null experiment");
  e->config.seed = seed;
  return INFOPLAN_OK;
}

int infoplan_experiment_set_horizon(infoplan_experiment* e, size_t horizon) {
  if (!e) return usage("null experiment");
  if (horizon == 0) return usage("horizon must be at least 1");
  e->config.plan.horizon = horizon;
  return INFOPLAN_OK;
}

int infoplan_experiment_set_mode(infoplan_experiment* e, const char* mode) {
  if (!e || !mode) return usage("null argument");
  const std::string m = mode;
  if (m == "rhc") {
    e->config.planner = PlannerMode::Rhc;
  } else if (m == "exhaustive") {
    e->config.planner = PlannerMode::Exhaustive;
  } else {
    return usage("mode must be 'rhc' or 'exhaustive'");
  }
  return INFOPLAN_OK;
}

int infoplan_experiment_set_jobs(infoplan_experiment* e, size_t jobs) {
  if (!e) return usage("null experiment");
  if (jobs == 0) return usage("jobs must be at least 1");
  e->config.plan.jobs = jobs;
  return INFOPLAN_OK;
}

int infoplan_experiment_set_trials(infoplan_experiment* e, size_t trials) {
  if (!e) return usage("null experiment");
  e->config.trials = trials;
  return INFOPLAN_OK;
}

const char* infoplan_experiment_json(infoplan_experiment* e) {
  if (!e) return "";
  e->json = to_json(e->config).dump(2) + "\n";
  return e->json.c_str();
}

void infoplan_experiment_free(infoplan_experiment* e) { delete e; }

int infoplan_plan_run(const infoplan_experiment* e, infoplan_plan** out) {
  if (!e || !out) return usage("null argument");
  *out = nullptr;
  return guarded([&] {
    SingleRun run = run_single(e->config);
    const auto& product = run.instance.product;
    Json j;
    j["mode"] = e->config.planner == PlannerMode::Rhc ? "rhc" : "exhaustive";
    j["seed"] = e->config.seed;
    j["horizon"] = e->config.plan.horizon;
    j["satisfied"] = run.result.satisfied;
    j["steps"] = run.result.steps;
    j["initial_entropy_bits"] = run.result.initial_entropy_bits;
    j["terminal_entropy_bits"] = run.result.terminal_entropy_bits;
    j["rejected_instances"] = run.result.redraws;
    if (run.plan) j["plan"] = to_json(*run.plan);
    j["trace"] = to_json(run.result.trace);
    j["transition_system"] = to_json(product.transition_system());
    j["automaton"] = to_json(product.automaton());
    j["product"] = to_json(product);
    j["sensor"] = to_json(run.instance.sensor);
    std::string dot = to_dot(product);
    *out = new infoplan_plan{std::move(run), j.dump(2) + "\n", std::move(dot)};
  });
}

double infoplan_plan_initial_entropy(const infoplan_plan* p) { return p ? p->run.result.initial_entropy_bits : 0.0; }
double infoplan_plan_terminal_entropy(const infoplan_plan* p) { return p ? p->run.result.terminal_entropy_bits : 0.0; }
int infoplan_plan_satisfied(const infoplan_plan* p) { return p && p->run.result.satisfied ? 1 : 0; }
size_t infoplan_plan_steps(const infoplan_plan* p) { return p ? p->run.result.steps : 0; }
const char* infoplan_plan_json(const infoplan_plan* p) { return p ? p->json.c_str() : ""; }
const char* infoplan_plan_product_dot(const infoplan_plan* p) { return p ? p->dot.c_str() : ""; }
void infoplan_plan_free(infoplan_plan* p) { delete p; }

int infoplan_study_run(const infoplan_experiment* e, infoplan_study** out) {
  if (!e || !out) return usage("null argument");
  *out = nullptr;
  return guarded([&] {
    StatsReport report = monte_carlo(e->config);
    std::string csv = trials_csv(report);
    std::string hist = histogram_csv(report);
    Json j = to_json(report, true);
    *out = new infoplan_study{std::move(report), std::move(csv), std::move(hist), j.dump(2) + "\n"};
  });
}

size_t infoplan_study_trials(const infoplan_study* s) { return s ? s->report.trials.size() : 0; }
double infoplan_study_mean(const infoplan_study* s) { return s ? s->report.mean : 0.0; }
double infoplan_study_median(const infoplan_study* s) { return s ? s->report.median : 0.0; }
double infoplan_study_variance(const infoplan_study* s) { return s ? s->report.variance : 0.0; }
double infoplan_study_satisfaction_rate(const infoplan_study* s) { return s ? s->report.satisfaction_rate : 0.0; }
size_t infoplan_study_rejected_instances(const infoplan_study* s) { return s ? s->report.rejected_instances : 0; }
const char* infoplan_study_trials_csv(const infoplan_study* s) { return s ? s->trials_csv.c_str() : ""; }
const char* infoplan_study_histogram_csv(const infoplan_study* s) { return s ? s->histogram_csv.c_str() : ""; }
const char* infoplan_study_json(const infoplan_study* s) { return s ? s->json.c_str() : ""; }
void infoplan_study_free(infoplan_study* s) { delete s; }

}  // extern "C"
