#ifndef INFOPLAN_INFOPLAN_H
#define INFOPLAN_INFOPLAN_H

/* C interface to the informative path planner. All handles are opaque and
 * owned by the caller; release them with the matching *_free function.
 * Functions returning int report an infoplan_status; on failure the message
 * is available from infoplan_last_error() on the same thread. Returned
 * strings stay valid until the owning handle is freed. */

#include <stddef.h>
#include <stdint.h>

#if defined(INFOPLAN_BUILDING_LIBRARY)
#define INFOPLAN_API __attribute__((visibility("default")))
#else
#define INFOPLAN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum infoplan_status {
  INFOPLAN_OK = 0,
  INFOPLAN_ERROR_USAGE = 2,      /* bad argument, parse or schema error */
  INFOPLAN_ERROR_INFEASIBLE = 3, /* no accepting run is reachable */
  INFOPLAN_ERROR_INTERNAL = 4    /* invariant violation */
} infoplan_status;

typedef struct infoplan_automaton infoplan_automaton;
typedef struct infoplan_experiment infoplan_experiment;
typedef struct infoplan_plan infoplan_plan;
typedef struct infoplan_study infoplan_study;

INFOPLAN_API const char* infoplan_version(void);
/* Message of the last failed call on this thread; "" if none. */
INFOPLAN_API const char* infoplan_last_error(void);

/* Automata ---------------------------------------------------------------- */

INFOPLAN_API int infoplan_automaton_translate(const char* formula, const char* const* atoms,
                                              size_t atom_count, infoplan_automaton** out);
INFOPLAN_API size_t infoplan_automaton_state_count(const infoplan_automaton* a);
/* letters[i] holds one bit per atom in declaration order. */
INFOPLAN_API int infoplan_automaton_accepts(const infoplan_automaton* a, const uint32_t* letters,
                                            size_t length, int* accepted);
/* Finite-word semantics of the formula itself, independent of the automaton. */
INFOPLAN_API int infoplan_automaton_formula_holds(const infoplan_automaton* a,
                                                  const uint32_t* letters, size_t length,
                                                  int* holds);
INFOPLAN_API const char* infoplan_automaton_dot(const infoplan_automaton* a);
INFOPLAN_API const char* infoplan_automaton_json(const infoplan_automaton* a);
INFOPLAN_API void infoplan_automaton_free(infoplan_automaton* a);

/* Experiments ------------------------------------------------------------- */

/* Parses a JSON configuration document; NULL or "" selects the defaults. */
INFOPLAN_API int infoplan_experiment_load(const char* json_text, infoplan_experiment** out);
INFOPLAN_API int infoplan_experiment_set_seed(infoplan_experiment* e, uint64_t seed);
INFOPLAN_API int infoplan_experiment_set_horizon(infoplan_experiment* e, size_t horizon);
/* "rhc" or "exhaustive". */
INFOPLAN_API int infoplan_experiment_set_mode(infoplan_experiment* e, const char* mode);
INFOPLAN_API int infoplan_experiment_set_jobs(infoplan_experiment* e, size_t jobs);
INFOPLAN_API int infoplan_experiment_set_trials(infoplan_experiment* e, size_t trials);
/* Effective configuration after overrides. */
INFOPLAN_API const char* infoplan_experiment_json(infoplan_experiment* e);
INFOPLAN_API void infoplan_experiment_free(infoplan_experiment* e);

/* Single planning run (trial 0 of the experiment). */
INFOPLAN_API int infoplan_plan_run(const infoplan_experiment* e, infoplan_plan** out);
INFOPLAN_API double infoplan_plan_initial_entropy(const infoplan_plan* p);
INFOPLAN_API double infoplan_plan_terminal_entropy(const infoplan_plan* p);
INFOPLAN_API int infoplan_plan_satisfied(const infoplan_plan* p);
INFOPLAN_API size_t infoplan_plan_steps(const infoplan_plan* p);
/* Trace, environment, product and (exhaustive mode) plan as one document. */
INFOPLAN_API const char* infoplan_plan_json(const infoplan_plan* p);
INFOPLAN_API const char* infoplan_plan_product_dot(const infoplan_plan* p);
INFOPLAN_API void infoplan_plan_free(infoplan_plan* p);

/* Monte Carlo studies. */
INFOPLAN_API int infoplan_study_run(const infoplan_experiment* e, infoplan_study** out);
INFOPLAN_API size_t infoplan_study_trials(const infoplan_study* s);
INFOPLAN_API double infoplan_study_mean(const infoplan_study* s);
INFOPLAN_API double infoplan_study_median(const infoplan_study* s);
INFOPLAN_API double infoplan_study_variance(const infoplan_study* s);
INFOPLAN_API double infoplan_study_satisfaction_rate(const infoplan_study* s);
INFOPLAN_API size_t infoplan_study_rejected_instances(const infoplan_study* s);
INFOPLAN_API const char* infoplan_study_trials_csv(const infoplan_study* s);
INFOPLAN_API const char* infoplan_study_histogram_csv(const infoplan_study* s);
/* Summary statistics and every trace. */
INFOPLAN_API const char* infoplan_study_json(const infoplan_study* s);
INFOPLAN_API void infoplan_study_free(infoplan_study* s);

#ifdef __cplusplus
}
#endif

#endif /* INFOPLAN_INFOPLAN_H */
