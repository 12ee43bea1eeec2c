#include "infoplan/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "infoplan/error.hpp"

namespace infoplan {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_index over an empty range");
  const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return std::min(i, n - 1);
}

Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t mixed = seed ^ index;
  std::seed_seq seq{static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
  return Rng(seq);
}

void ExperimentConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(peak_detection) || !unit(false_alarm) || !unit(truth_probability) || !unit(prior)) {
    throw Error(ErrorCode::InvalidArgument, "probabilities must lie in [0, 1]");
  }
  if (!(decay >= 0.0)) throw Error(ErrorCode::InvalidArgument, "decay must be >= 0");
  if (!(distance_low >= 0.0) || !(distance_high >= distance_low)) {
    throw Error(ErrorCode::InvalidArgument, "measurement distance bounds must satisfy 0 <= low <= high");
  }
  plan.validate();
  if (transition_system) return;
  if (width == 0 || height == 0) throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  const std::size_t n = width * height;
  if (start && *start >= n) throw Error(ErrorCode::InvalidArgument, "start region outside the grid");
  if (goal && *goal >= n) throw Error(ErrorCode::InvalidArgument, "goal region outside the grid");
  if (start.value_or(0) == goal.value_or(static_cast<Region>(n - 1))) {
    throw Error(ErrorCode::InvalidArgument, "start and goal must differ");
  }
  if (fixed_labels.empty()) {
    std::size_t total = 0;
    for (const auto& lc : label_counts) total += lc.count;
    if (total + 2 > n) throw Error(ErrorCode::InvalidArgument, "more labels than free regions");
  }
}

namespace {

Region default_goal(const ExperimentConfig& cfg) {
  return cfg.goal.value_or(static_cast<Region>(cfg.width * cfg.height - 1));
}

std::size_t atom_index(const AtomSet& ap, const std::string& name) {
  const auto i = ap.find(name);
  if (!i) throw Error(ErrorCode::InvalidArgument, "label '" + name + "' is not a declared atom");
  return *i;
}

}  // namespace

TransitionSystem generate_grid(const ExperimentConfig& cfg, Rng& rng) {
  cfg.validate();
  const AtomSet ap = cfg.atom_set();
  const std::size_t w = cfg.width;
  const std::size_t h = cfg.height;
  const std::size_t n = w * h;
  const Region start = cfg.start.value_or(0);
  const Region goal = default_goal(cfg);

  TransitionSystem ts(ap, n, start);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      ts.set_region_name(static_cast<Region>(r * w + c), "r" + std::to_string(r) + "c" + std::to_string(c));
    }
  }
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const auto q = static_cast<Region>(r * w + c);
      if (r > 0) ts.add_transition(q, "N", q - static_cast<Region>(w), 1.0);
      if (r + 1 < h) ts.add_transition(q, "S", q + static_cast<Region>(w), 1.0);
      if (c + 1 < w) ts.add_transition(q, "E", q + 1, 1.0);
      if (c > 0) ts.add_transition(q, "W", q - 1, 1.0);
    }
  }
  const double span = cfg.distance_high - cfg.distance_low;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const auto q = static_cast<Region>(r * w + c);
      if (c + 1 < w) ts.set_measurement_distance(q, q + 1, cfg.distance_low + span * uniform01(rng));
      if (r + 1 < h) {
        ts.set_measurement_distance(q, q + static_cast<Region>(w),
                                    cfg.distance_low + span * uniform01(rng));
      }
    }
  }

  std::vector<std::optional<std::size_t>> label(n);
  label[goal] = atom_index(ap, cfg.goal_atom);
  if (!cfg.fixed_labels.empty()) {
    for (const auto& [atom, regions] : cfg.fixed_labels) {
      const std::size_t a = atom_index(ap, atom);
      for (Region q : regions) {
        if (q >= n) throw Error(ErrorCode::InvalidArgument, "fixed label outside the grid");
        if (label[q] && *label[q] != a) {
          throw Error(ErrorCode::InvalidArgument, "region " + std::to_string(q) + " has conflicting labels");
        }
        label[q] = a;
      }
    }
  } else {
    for (const auto& lc : cfg.label_counts) {
      const std::size_t a = atom_index(ap, lc.atom);
      for (std::size_t k = 0; k < lc.count; ++k) {
        Region q = 0;
        do {
          q = static_cast<Region>(uniform_index(rng, n));
        } while (q == start || label[q]);
        label[q] = a;
      }
    }
  }
  for (Region q = 0; q < n; ++q) {
    if (label[q]) ts.set_label(q, Letter(0).with(*label[q]));
  }
  ts.validate();
  return ts;
}

GroundTruth sample_ground_truth(std::size_t cells, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "Bernoulli parameter outside [0, 1]");
  GroundTruth truth;
  truth.occupied.resize(cells);
  for (auto& s : truth.occupied) s = uniform01(rng) < p ? 1 : 0;
  return truth;
}

bool sample_report(const SensorModel& model, const GroundTruth& truth, Region q, Rng& rng) {
  return uniform01(rng) < alert_likelihood(model, truth.occupied, q, true);
}

Instance make_instance(const ExperimentConfig& cfg, Rng& rng) {
  cfg.validate();
  const AtomSet ap = cfg.atom_set();
  Formula f = parse_formula(cfg.formula, ap);
  Fsa fsa = translate(f, ap);
  for (std::size_t redraws = 0;; ++redraws) {
    TransitionSystem ts = cfg.transition_system ? *cfg.transition_system : generate_grid(cfg, rng);
    ts.validate();
    ProductAutomaton product = build_product(ts, fsa);
    try {
      prepare_potential(product);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible || cfg.transition_system || !cfg.fixed_labels.empty()) throw;
      if (redraws >= cfg.max_redraws) {
        throw Error(ErrorCode::Infeasible, "specification infeasible on " + std::to_string(redraws + 1) +
                                               " consecutive random environments");
      }
      continue;
    }
    SensorModel sensor =
        SensorModel::from_transition_system(ts, cfg.peak_detection, cfg.decay, cfg.false_alarm);
    return Instance{std::move(f), std::move(fsa), std::move(product), std::move(sensor), redraws};
  }
}

Belief initial_belief(const ExperimentConfig& cfg, std::size_t cells) {
  if (cfg.belief_mode == Belief::Mode::Joint) {
    const std::vector<double> m(cells, cfg.prior);
    return Belief::joint_from_marginals(m, cfg.joint_cap);
  }
  return Belief::uniform(cells, cfg.prior);
}

namespace {

struct SharedPlan {
  const Instance* instance = nullptr;
  std::optional<ExhaustiveResult> exhaustive;
};

struct TrialArtifacts {
  std::optional<Instance> instance;
  std::optional<ExhaustiveResult> plan;
};

TrialResult execute_trial(const ExperimentConfig& cfg, std::size_t index, const SharedPlan& shared,
                          TrialArtifacts* keep = nullptr) {
  const auto clock_start = std::chrono::steady_clock::now();
  const std::uint64_t seed = cfg.seed ^ static_cast<std::uint64_t>(index);
  Rng rng = trial_rng(cfg.seed, index);

  std::optional<Instance> own;
  const Instance* inst = shared.instance;
  if (!inst) {
    own.emplace(make_instance(cfg, rng));
    inst = &*own;
  }
  const auto& ts = inst->product.transition_system();
  const GroundTruth truth = sample_ground_truth(ts.region_count(), cfg.truth_probability, rng);
  const Belief b0 = initial_belief(cfg, ts.region_count());
  const ReportSource sense = [&](Region q) { return sample_report(inst->sensor, truth, q, rng); };

  TrialResult result;
  result.trial = index;
  result.seed = seed;
  result.redraws = own ? own->redraws : 0;
  std::optional<ExhaustiveResult> planned;
  if (cfg.planner == PlannerMode::Rhc) {
    result.trace = run_rhc(inst->product, b0, inst->sensor, cfg.plan, sense);
  } else {
    const ExhaustiveResult* plan = shared.exhaustive ? &*shared.exhaustive : nullptr;
    if (!plan) {
      PlanConfig pc = cfg.plan;
      pc.jobs = 1;
      planned.emplace(plan_exhaustive(inst->product, b0, inst->sensor, pc));
      plan = &*planned;
    }
    result.trace = replay_path(inst->product, plan->run.states, b0, inst->sensor, sense);
  }
  const auto regions = result.trace.regions();
  if (keep) {
    keep->instance.emplace(*inst);
    keep->plan = shared.exhaustive ? shared.exhaustive : planned;
  }
  result.satisfied = word_satisfies(inst->formula, label_word(ts, regions));
  result.steps = regions.size() - 1;
  result.initial_entropy_bits = result.trace.initial_entropy_bits;
  result.terminal_entropy_bits = result.trace.terminal_entropy_bits;
  if (cfg.timing) {
    result.cpu_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              clock_start)
                        .count();
  }
  return result;
}

}  // namespace

void summarize(StatsReport& report) {
  const auto& t = report.trials;
  report.histogram.clear();
  if (t.empty()) {
    report.mean = report.median = report.variance = report.min = report.max = 0.0;
    report.satisfaction_rate = 0.0;
    return;
  }
  std::vector<double> v;
  v.reserve(t.size());
  std::size_t satisfied = 0;
  for (const auto& r : t) {
    v.push_back(r.terminal_entropy_bits);
    satisfied += r.satisfied ? 1 : 0;
  }
  const double n = static_cast<double>(v.size());
  report.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - report.mean) * (x - report.mean);
  report.variance = ss / n;
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  report.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  report.min = sorted.front();
  report.max = sorted.back();
  report.satisfaction_rate = static_cast<double>(satisfied) / n;

  const double w = kHistogramBinWidth;
  const double low = std::floor(report.min / w) * w;
  const auto bins = static_cast<std::size_t>(std::floor((report.max - low) / w)) + 1;
  for (std::size_t i = 0; i < bins; ++i) {
    report.histogram.push_back({low + static_cast<double>(i) * w, low + static_cast<double>(i + 1) * w, 0});
  }
  for (double x : v) {
    auto i = static_cast<std::size_t>(std::floor((x - low) / w));
    report.histogram[std::min(i, bins - 1)].count++;
  }
}

StatsReport monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  StatsReport report;
  std::optional<Instance> instance;
  SharedPlan shared;
  if (!cfg.resample_instance || cfg.transition_system) {
    Rng rng = trial_rng(cfg.seed, std::numeric_limits<std::uint64_t>::max());
    instance.emplace(make_instance(cfg, rng));
    shared.instance = &*instance;
    report.rejected_instances = instance->redraws;
    if (cfg.planner == PlannerMode::Exhaustive && cfg.trials > 0) {
      const Belief b0 = initial_belief(cfg, instance->product.transition_system().region_count());
      shared.exhaustive.emplace(plan_exhaustive(instance->product, b0, instance->sensor, cfg.plan));
      report.planned_bits = shared.exhaustive->expected_bits;
    }
  }

  report.trials.resize(cfg.trials);
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (std::size_t i = cursor++; i < cfg.trials; i = cursor++) {
      try {
        report.trials[i] = execute_trial(cfg, i, shared);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        cursor = cfg.trials;
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(cfg.plan.jobs, 1, std::max<std::size_t>(cfg.trials, 1));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  if (shared.instance == nullptr) {
    for (const auto& t : report.trials) report.rejected_instances += t.redraws;
  }
  summarize(report);
  return report;
}

SingleRun run_single(const ExperimentConfig& cfg) {
  ExperimentConfig one = cfg;
  one.trials = 1;
  std::optional<Instance> shared_instance;
  SharedPlan sp;
  if (!cfg.resample_instance || cfg.transition_system) {
    Rng rng = trial_rng(cfg.seed, std::numeric_limits<std::uint64_t>::max());
    shared_instance.emplace(make_instance(one, rng));
    sp.instance = &*shared_instance;
  }
  TrialArtifacts keep;
  TrialResult result = execute_trial(one, 0, sp, &keep);
  if (shared_instance) result.redraws = shared_instance->redraws;
  return {std::move(*keep.instance), std::move(result), std::move(keep.plan)};
}

std::string format_double(double value, int digits) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string trials_csv(const StatsReport& report) {
  std::string out = "trial,seed,terminal_entropy_bits,satisfied,steps,cpu_ms\n";
  for (const auto& t : report.trials) {
    out += std::to_string(t.trial) + ',' + std::to_string(t.seed) + ',' +
           format_double(t.terminal_entropy_bits) + ',' + (t.satisfied ? "true" : "false") + ',' +
           std::to_string(t.steps) + ',' + format_double(t.cpu_ms, 3) + '\n';
  }
  return out;
}

std::string histogram_csv(const StatsReport& report) {
  std::string out = "bin_low,bin_high,count\n";
  for (const auto& b : report.histogram) {
    out += format_double(b.low, 3) + ',' + format_double(b.high, 3) + ',' + std::to_string(b.count) + '\n';
  }
  return out;
}

}  // namespace infoplan
