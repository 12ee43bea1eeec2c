#pragma once

// Expected terminal entropy of candidate paths, the exhaustive planner over
// accepting runs, and the receding-horizon planner.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "infoplan/belief.hpp"
#include "infoplan/graph_model.hpp"

namespace infoplan {

struct PlanConfig {
  std::size_t horizon = 3;       // b, in transitions
  std::size_t exact_cap = 12;    // max report count evaluated by full enumeration
  std::size_t samples = 512;     // Monte Carlo samples beyond the cap
  std::uint64_t seed = 0;
  std::size_t run_limit = 5'000'000;
  std::size_t jobs = 1;

  void validate() const;
};

/// Whether the first region of a path contributes a report. The robot's
/// position at planning time has usually been measured already.
enum class StartReport { Skip, Take };

/// E[H(terminal belief)] over the report sequence collected along `path`,
/// reports distributed by the belief's own predictive chain. Exact when the
/// report count is within cfg.exact_cap, Monte Carlo otherwise. Throws
/// InvalidArgument when consecutive regions are not connected in `ts`.
double expected_conditional_entropy(const TransitionSystem& ts, std::span<const Region> path,
                                    const Belief& b0, const SensorModel& model,
                                    const PlanConfig& cfg,
                                    StartReport start = StartReport::Skip);

/// Exact distribution of the terminal belief entropy along `path`, one entry
/// per report sequence. Limited to 24 reports.
struct EntropyOutcome {
  double entropy_bits;
  double probability;
};
std::vector<EntropyOutcome> terminal_entropy_pmf(std::span<const Region> path, const Belief& b0,
                                                 const SensorModel& model,
                                                 StartReport start = StartReport::Skip);

struct ExhaustiveResult {
  AcceptingRun run;
  double expected_bits = 0.0;
  std::size_t runs_evaluated = 0;
};

/// Minimizes expected terminal entropy over every accepting run, with a
/// report at each region of the run including the first. Ties go to the
/// lexicographically smallest run. Throws Infeasible without accepting runs.
ExhaustiveResult plan_exhaustive(const ProductAutomaton& p, const Belief& b0,
                                 const SensorModel& model, const PlanConfig& cfg);

struct RhcState {
  ProductState current = 0;
  std::size_t time = 0;
  /// Trajectory chosen at the previous solve, starting at its own start
  /// state. Its last state is the previous predicted terminal.
  ProductPath predicted;
  /// Set once the constrained neighborhood has collapsed onto the target.
  bool in_terminal_region = false;
  /// States occupied since entering the terminal region.
  std::vector<ProductState> visited;
  Belief belief;
};

/// Requires an attached potential with W(initial) finite and strictly
/// positive edge weights. The predicted trajectory is seeded with the first
/// `horizon` states of a W-greedy shortest path.
RhcState rhc_initial_state(const ProductAutomaton& p, Belief b0, std::size_t horizon);

struct RhcDecision {
  ProductState next = 0;
  ProductPath trajectory;  // starts at the current state
  double expected_bits = 0.0;
  std::size_t candidates = 0;  // enumerated
  std::size_t feasible = 0;    // after the terminal, energy and cycle constraints
  bool terminal_region = false;
};

/// One solve of the horizon problem from state.current. Throws Internal when
/// no candidate survives the constraints.
RhcDecision rhc_step(const RhcState& state, const ProductAutomaton& p, const SensorModel& model,
                     const PlanConfig& cfg);

struct TraceStep {
  std::size_t time = 0;
  Region region = 0;
  ProductState state = 0;
  bool report = false;
  double entropy_bits = 0.0;  // after incorporating `report`
  Distance potential;
  std::size_t candidates = 0;
  std::size_t feasible = 0;
  double expected_bits = 0.0;
  ProductPath trajectory;  // empty at the target
};

struct Trace {
  std::vector<TraceStep> steps;
  double initial_entropy_bits = 0.0;
  double terminal_entropy_bits = 0.0;
  bool reached_target = false;

  std::vector<Region> regions() const;
  std::vector<ProductState> states() const;
};

/// Report source: the sensor reading at a region, drawn by the caller.
using ReportSource = std::function<bool(Region)>;

/// Closed loop: report at the start, then solve, move one transition,
/// report and update until the target is reached.
Trace run_rhc(const ProductAutomaton& p, const Belief& b0, const SensorModel& model,
              const PlanConfig& cfg, const ReportSource& sense);

/// Executes a fixed run with reports at every region, for comparison with
/// the closed loop.
Trace replay_path(const ProductAutomaton& p, std::span<const ProductState> run, const Belief& b0,
                  const SensorModel& model, const ReportSource& sense);

}  // namespace infoplan
