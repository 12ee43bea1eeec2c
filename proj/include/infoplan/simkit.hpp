#pragma once

// Grid environments, ground truths and simulated reports, and the seeded
// Monte Carlo harness.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "infoplan/belief.hpp"
#include "infoplan/graph_model.hpp"
#include "infoplan/planners.hpp"
#include "infoplan/scltl.hpp"

namespace infoplan {

using Rng = std::mt19937_64;

/// Uniform on [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);
/// Uniform on {0, ..., n-1}; n > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);
/// Generator for trial `index` of a study seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);

enum class PlannerMode { Exhaustive, Rhc };

struct LabelCount {
  std::string atom;
  std::size_t count = 0;
};

struct ExperimentConfig {
  std::size_t width = 5;
  std::size_t height = 5;
  std::optional<Region> start;  // default: corner 0
  std::optional<Region> goal;   // default: the opposite corner
  std::string goal_atom = "C";
  /// Random placement, one label per region, never on start or goal.
  std::vector<LabelCount> label_counts{{"D1", 2}, {"D2", 2}, {"U", 3}};
  /// When non-empty, replaces random placement: atom -> regions.
  std::vector<std::pair<std::string, std::vector<Region>>> fixed_labels;
  /// Explicit environment; replaces the grid generator entirely.
  std::optional<TransitionSystem> transition_system;

  std::vector<std::string> atoms{"D1", "D2", "U", "C"};
  std::string formula = "(!U U C) & (!C U D2) & (!D2 U D1)";

  double peak_detection = 0.9;
  double decay = 0.01;
  double false_alarm = 0.01;
  double truth_probability = 0.08;
  double prior = 0.5;
  double distance_low = 0.0;
  double distance_high = 10.0;

  Belief::Mode belief_mode = Belief::Mode::Factored;
  std::size_t joint_cap = Belief::kDefaultJointCap;
  PlannerMode planner = PlannerMode::Rhc;
  PlanConfig plan;

  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// Draw a fresh environment per trial; otherwise one environment from
  /// `seed` is shared by every trial.
  bool resample_instance = true;
  std::size_t max_redraws = 1000;
  /// Record per-trial wall time; off keeps outputs byte-reproducible.
  bool timing = false;

  void validate() const;
  AtomSet atom_set() const { return AtomSet(atoms); }
};

/// 4-connected grid, unit transition weights, d_M ~ U(low, high) per
/// adjacent pair. Labels per config.
TransitionSystem generate_grid(const ExperimentConfig& cfg, Rng& rng);

struct GroundTruth {
  std::vector<std::uint8_t> occupied;
};

GroundTruth sample_ground_truth(std::size_t cells, double p, Rng& rng);
bool sample_report(const SensorModel& model, const GroundTruth& truth, Region q, Rng& rng);

/// Environment with its product automaton and potential.
struct Instance {
  Formula formula;
  Fsa automaton;
  ProductAutomaton product;
  SensorModel sensor;
  std::size_t redraws = 0;  // infeasible draws rejected before this one
};

/// Builds the instance for `cfg`, redrawing infeasible random environments.
/// Throws Infeasible for fixed environments or after cfg.max_redraws.
Instance make_instance(const ExperimentConfig& cfg, Rng& rng);

Belief initial_belief(const ExperimentConfig& cfg, std::size_t cells);

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double initial_entropy_bits = 0.0;
  double terminal_entropy_bits = 0.0;
  bool satisfied = false;
  std::size_t steps = 0;  // transitions
  double cpu_ms = 0.0;
  std::size_t redraws = 0;
  Trace trace;
};

struct HistogramBin {
  double low;
  double high;
  std::size_t count;
};

struct StatsReport {
  std::vector<TrialResult> trials;
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
  double satisfaction_rate = 0.0;
  std::size_t rejected_instances = 0;
  /// Expected terminal entropy of the exhaustive plan on a shared instance.
  std::optional<double> planned_bits;
  std::vector<HistogramBin> histogram;
};

inline constexpr double kHistogramBinWidth = 0.5;

/// Fills the statistics from report.trials; no trials yields zeros and no bins.
void summarize(StatsReport& report);

StatsReport monte_carlo(const ExperimentConfig& cfg);

/// Trial 0 of the study together with the environment it ran on.
struct SingleRun {
  Instance instance;
  TrialResult result;
  std::optional<ExhaustiveResult> plan;  // exhaustive mode only
};
SingleRun run_single(const ExperimentConfig& cfg);

std::string trials_csv(const StatsReport& report);
std::string histogram_csv(const StatsReport& report);

/// Fixed-point decimal rendering used by every text output.
std::string format_double(double value, int digits = 9);

}  // namespace infoplan
