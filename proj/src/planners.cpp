#include "infoplan/planners.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

#include "infoplan/error.hpp"

namespace infoplan {

void PlanConfig::validate() const {
  if (horizon == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
  if (exact_cap == 0 || samples == 0) {
    throw Error(ErrorCode::InvalidArgument, "exact cap and sample count must be positive");
  }
  if (run_limit == 0) throw Error(ErrorCode::InvalidArgument, "run limit must be positive");
}

namespace {

std::vector<Region> report_regions(std::span<const Region> path, StartReport start) {
  if (path.empty()) return {};
  const std::size_t first = start == StartReport::Take ? 0 : 1;
  return {path.begin() + static_cast<std::ptrdiff_t>(first), path.end()};
}

void check_connected(const TransitionSystem& ts, std::span<const Region> path) {
  for (Region q : path) {
    if (q >= ts.region_count()) throw Error(ErrorCode::InvalidArgument, "path leaves the region set");
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    bool linked = false;
    for (std::size_t idx : ts.outgoing(path[i - 1])) {
      if (ts.transitions()[idx].to == path[i]) {
        linked = true;
        break;
      }
    }
    if (!linked) {
      throw Error(ErrorCode::InvalidArgument, "path is not connected: no transition " +
                                                  std::to_string(path[i - 1]) + " -> " +
                                                  std::to_string(path[i]));
    }
  }
}

double exact_expectation(const Belief& b, std::span<const Region> reports, const SensorModel& model) {
  if (reports.empty()) return belief_entropy(b);
  const Region q = reports.front();
  const double p1 = alert_probability(b, model, q);
  double total = 0.0;
  if (p1 > 0.0) total += p1 * exact_expectation(bayes_update(b, model, q, true), reports.subspan(1), model);
  if (p1 < 1.0) {
    total += (1.0 - p1) * exact_expectation(bayes_update(b, model, q, false), reports.subspan(1), model);
  }
  return total;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sampled_expectation(const Belief& b0, std::span<const Region> reports,
                           const SensorModel& model, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Belief b = b0;
    for (Region q : reports) {
      const bool y = uniform01(rng) < alert_probability(b, model, q);
      b.observe(model, q, y);
    }
    total += belief_entropy(b);
  }
  return total / static_cast<double>(samples);
}

void collect_leaves(const Belief& b, std::span<const Region> reports, const SensorModel& model,
                    double weight, std::vector<EntropyOutcome>& out) {
  if (reports.empty()) {
    out.push_back({belief_entropy(b), weight});
    return;
  }
  const Region q = reports.front();
  const double p1 = alert_probability(b, model, q);
  if (p1 > 0.0) {
    collect_leaves(bayes_update(b, model, q, true), reports.subspan(1), model, weight * p1, out);
  }
  if (p1 < 1.0) {
    collect_leaves(bayes_update(b, model, q, false), reports.subspan(1), model,
                   weight * (1.0 - p1), out);
  }
}

}  // namespace

double expected_conditional_entropy(const TransitionSystem& ts, std::span<const Region> path,
                                    const Belief& b0, const SensorModel& model,
                                    const PlanConfig& cfg, StartReport start) {
  check_connected(ts, path);
  const auto reports = report_regions(path, start);
  if (reports.size() <= cfg.exact_cap) return exact_expectation(b0, reports, model);
  return sampled_expectation(b0, reports, model, cfg.samples, cfg.seed);
}

std::vector<EntropyOutcome> terminal_entropy_pmf(std::span<const Region> path, const Belief& b0,
                                                 const SensorModel& model, StartReport start) {
  const auto reports = report_regions(path, start);
  if (reports.size() > 24) {
    throw Error(ErrorCode::InvalidArgument, "too many reports for an exact entropy distribution");
  }
  std::vector<EntropyOutcome> out;
  collect_leaves(b0, reports, model, 1.0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive search

ExhaustiveResult plan_exhaustive(const ProductAutomaton& p, const Belief& b0,
                                 const SensorModel& model, const PlanConfig& cfg) {
  cfg.validate();
  auto runs = enumerate_accepting_runs(p, cfg.run_limit);
  if (runs.empty()) {
    throw Error(ErrorCode::Infeasible, "specification infeasible: no accepting run is reachable");
  }
  const auto& ts = p.transition_system();
  std::vector<double> value(runs.size());
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (std::size_t i = cursor++; i < runs.size(); i = cursor++) {
      value[i] = expected_conditional_entropy(ts, runs[i].regions, b0, model, cfg, StartReport::Take);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, runs.size());
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(work);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (value[i] < value[best]) best = i;
  }
  return {std::move(runs[best]), value[best], runs.size()};
}

// ---------------------------------------------------------------------------
// Receding horizon

RhcState rhc_initial_state(const ProductAutomaton& p, Belief b0, std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
  const auto target = p.target();
  if (!target) throw Error(ErrorCode::InvalidArgument, "product has no potential attached");
  if (!p.potential(p.initial()).finite()) {
    throw Error(ErrorCode::Infeasible, "specification infeasible: the target is unreachable");
  }
  for (ProductState s = 0; s < p.state_count(); ++s) {
    for (const auto& e : p.successors(s)) {
      if (!(e.weight > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "receding horizon planning requires strictly positive transition weights");
      }
    }
  }

  ProductPath seed{p.initial()};
  while (seed.size() < horizon && seed.back() != *target) {
    const ProductState s = seed.back();
    std::optional<ProductState> best;
    double best_cost = 0.0;
    for (const auto& e : p.successors(s)) {
      const Distance w = p.potential(e.to);
      if (!w.finite()) continue;
      const double cost = e.weight + w.value();
      if (!best || cost < best_cost) {
        best = e.to;
        best_cost = cost;
      }
    }
    if (!best) throw Error(ErrorCode::Internal, "potential has no descending successor");
    seed.push_back(*best);
  }
  return RhcState{p.initial(), 0, std::move(seed), false, {}, std::move(b0)};
}

RhcDecision rhc_step(const RhcState& state, const ProductAutomaton& p, const SensorModel& model,
                     const PlanConfig& cfg) {
  const auto target = p.target();
  if (!target) throw Error(ErrorCode::InvalidArgument, "product has no potential attached");
  if (state.current == *target) throw Error(ErrorCode::InvalidArgument, "already at the target");
  if (state.predicted.empty()) throw Error(ErrorCode::InvalidArgument, "no predicted trajectory");

  const std::size_t b = cfg.horizon;
  const auto hood = constrained_neighborhood(p, state.current, b);
  const bool collapsed = hood.size() == 1 && hood.front() == *target;

  RhcDecision decision;
  decision.terminal_region = state.in_terminal_region || collapsed;

  std::vector<ProductState> forbidden;
  if (decision.terminal_region) {
    forbidden = state.visited;
    forbidden.push_back(state.current);
  }
  const auto candidates = finite_paths(p, state.current, b, forbidden);
  decision.candidates = candidates.size();

  const Distance previous = p.potential(state.predicted.back());
  const auto& ts = p.transition_system();
  bool found = false;
  for (const auto& path : candidates) {
    const ProductState end = path.back();
    if (decision.terminal_region) {
      if (end != *target) continue;
    } else {
      if (!std::binary_search(hood.begin(), hood.end(), end)) continue;
      if (!(p.potential(end) < previous)) continue;
    }
    ++decision.feasible;
    const auto regions = project(p, path);
    const double bits = expected_conditional_entropy(ts, regions, state.belief, model, cfg);
    if (!found || bits < decision.expected_bits) {
      found = true;
      decision.expected_bits = bits;
      decision.trajectory = path;
    }
  }
  if (!found) throw Error(ErrorCode::Internal, "feasibility violated: no admissible trajectory");
  decision.next = decision.trajectory.at(1);
  return decision;
}

std::vector<Region> Trace::regions() const {
  std::vector<Region> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.region);
  return out;
}

std::vector<ProductState> Trace::states() const {
  std::vector<ProductState> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.state);
  return out;
}

Trace run_rhc(const ProductAutomaton& p, const Belief& b0, const SensorModel& model,
              const PlanConfig& cfg, const ReportSource& sense) {
  cfg.validate();
  RhcState state = rhc_initial_state(p, b0, cfg.horizon);
  const ProductState target = *p.target();

  Trace trace;
  trace.initial_entropy_bits = belief_entropy(b0);
  auto arrive = [&](ProductState s) {
    const Region q = p.region(s);
    const bool y = sense(q);
    state.belief.observe(model, q, y);
    TraceStep step;
    step.time = state.time;
    step.region = q;
    step.state = s;
    step.report = y;
    step.entropy_bits = belief_entropy(state.belief);
    step.potential = p.potential(s);
    trace.steps.push_back(std::move(step));
  };

  arrive(state.current);
  const std::size_t bound = 2 * p.state_count() + cfg.horizon + 2;
  while (state.current != target) {
    if (state.time > bound) throw Error(ErrorCode::Internal, "receding horizon loop did not terminate");
    const RhcDecision d = rhc_step(state, p, model, cfg);
    auto& here = trace.steps.back();
    here.candidates = d.candidates;
    here.feasible = d.feasible;
    here.expected_bits = d.expected_bits;
    here.trajectory = d.trajectory;

    if (d.terminal_region && !state.in_terminal_region) {
      state.in_terminal_region = true;
      state.visited.clear();
    }
    if (state.in_terminal_region) state.visited.push_back(state.current);
    state.predicted = d.trajectory;
    state.current = d.next;
    ++state.time;
    arrive(state.current);
  }
  trace.reached_target = true;
  trace.terminal_entropy_bits = trace.steps.back().entropy_bits;
  return trace;
}

Trace replay_path(const ProductAutomaton& p, std::span<const ProductState> run, const Belief& b0,
                  const SensorModel& model, const ReportSource& sense) {
  if (run.empty()) throw Error(ErrorCode::InvalidArgument, "empty run");
  Trace trace;
  trace.initial_entropy_bits = belief_entropy(b0);
  Belief b = b0;
  for (std::size_t t = 0; t < run.size(); ++t) {
    const ProductState s = run[t];
    if (t > 0) {
      const auto next = p.successors(run[t - 1]);
      if (std::none_of(next.begin(), next.end(), [&](const ProductEdge& e) { return e.to == s; })) {
        throw Error(ErrorCode::InvalidArgument, "run is not connected in the product");
      }
    }
    const Region q = p.region(s);
    const bool y = sense(q);
    b.observe(model, q, y);
    TraceStep step;
    step.time = t;
    step.region = q;
    step.state = s;
    step.report = y;
    step.entropy_bits = belief_entropy(b);
    if (p.target()) step.potential = p.potential(s);
    trace.steps.push_back(std::move(step));
  }
  trace.reached_target = p.target() && run.back() == *p.target();
  trace.terminal_entropy_bits = trace.steps.back().entropy_bits;
  return trace;
}

}  // namespace infoplan
