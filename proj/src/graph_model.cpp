#include "infoplan/graph_model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>

#include "infoplan/error.hpp"

namespace infoplan {

// ---------------------------------------------------------------------------
// TransitionSystem

TransitionSystem::TransitionSystem(AtomSet atoms, std::size_t region_count, Region initial)
    : atoms_(std::move(atoms)),
      initial_(initial),
      names_(region_count),
      labels_(region_count),
      outgoing_(region_count) {
  if (region_count == 0) throw Error(ErrorCode::InvalidArgument, "transition system has no regions");
  check_region(initial);
  for (std::size_t i = 0; i < region_count; ++i) names_[i] = "q" + std::to_string(i);
}

void TransitionSystem::check_region(Region q) const {
  if (q >= labels_.size()) {
    throw Error(ErrorCode::InvalidArgument, "region " + std::to_string(q) + " out of range");
  }
}

void TransitionSystem::set_region_name(Region q, std::string name) {
  check_region(q);
  names_[q] = std::move(name);
}

void TransitionSystem::set_label(Region q, Letter letter) {
  check_region(q);
  if (letter.bits() >= atoms_.letter_count()) {
    throw Error(ErrorCode::InvalidArgument, "label uses atoms outside the declared set");
  }
  labels_[q] = letter;
}

ActionId TransitionSystem::action_id(const std::string& name) {
  auto it = std::find(actions_.begin(), actions_.end(), name);
  if (it != actions_.end()) return static_cast<ActionId>(it - actions_.begin());
  actions_.push_back(name);
  return static_cast<ActionId>(actions_.size() - 1);
}

void TransitionSystem::add_transition(Region from, const std::string& action, Region to,
                                      double weight) {
  check_region(from);
  check_region(to);
  if (!(weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, "transition weight must be >= 0");
  const ActionId a = action_id(action);
  for (std::size_t idx : outgoing_[from]) {
    if (transitions_[idx].action == a) {
      throw Error(ErrorCode::InvalidArgument, "action '" + action + "' from region " +
                                                  std::to_string(from) + " is already defined");
    }
  }
  outgoing_[from].push_back(transitions_.size());
  transitions_.push_back({from, a, to, weight});
}

void TransitionSystem::set_measurement_distance(Region a, Region b, double distance) {
  check_region(a);
  check_region(b);
  if (!(distance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "measurement distance must be >= 0");
  if (a == b && distance != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "a region's distance to itself is 0");
  }
  measurement_[{std::min(a, b), std::max(a, b)}] = distance;
}

std::optional<double> TransitionSystem::measurement_distance(Region a, Region b) const {
  if (a == b) return 0.0;
  auto it = measurement_.find({std::min(a, b), std::max(a, b)});
  if (it == measurement_.end()) return std::nullopt;
  return it->second;
}

std::vector<ObservationLink> TransitionSystem::observation_neighborhood(Region q) const {
  check_region(q);
  std::vector<ObservationLink> out{{q, 0.0}};
  for (const auto& [key, d] : measurement_) {
    if (key.first == key.second) continue;
    if (key.first == q) out.push_back({key.second, d});
    if (key.second == q) out.push_back({key.first, d});
  }
  std::sort(out.begin(), out.end(),
            [](const ObservationLink& a, const ObservationLink& b) { return a.region < b.region; });
  return out;
}

void TransitionSystem::validate() const {
  for (const auto& t : transitions_) {
    if (t.from != t.to && !measurement_distance(t.from, t.to)) {
      throw Error(ErrorCode::InvalidArgument,
                  "regions " + std::to_string(t.from) + " and " + std::to_string(t.to) +
                      " are connected but have no measurement distance");
    }
  }
}

std::vector<Letter> label_word(const TransitionSystem& ts, std::span<const Region> regions) {
  std::vector<Letter> word;
  word.reserve(regions.size());
  for (Region q : regions) word.push_back(ts.label(q));
  return word;
}

// ---------------------------------------------------------------------------
// ProductAutomaton

std::optional<ProductState> ProductAutomaton::find(Region q, Fsa::State a) const {
  auto it = index_.find({q, a});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Distance ProductAutomaton::potential(ProductState s) const {
  if (!target_) throw Error(ErrorCode::InvalidArgument, "product has no target selected");
  return potential_.at(s);
}

void ProductAutomaton::attach_potential(ProductState target, std::vector<Distance> table) {
  if (target >= state_count() || table.size() != state_count()) {
    throw Error(ErrorCode::InvalidArgument, "potential table does not match the product");
  }
  target_ = target;
  potential_ = std::move(table);
}

ProductAutomaton build_product(const TransitionSystem& ts, const Fsa& fsa, ProductOptions options) {
  if (!(ts.atoms() == fsa.atoms())) {
    throw Error(ErrorCode::InvalidArgument,
                "transition system and automaton use different atomic proposition orderings");
  }
  ProductAutomaton p(ts, fsa, options);

  auto intern = [&](Region q, Fsa::State a, std::deque<ProductState>& work) {
    auto [it, inserted] = p.index_.try_emplace({q, a}, static_cast<ProductState>(p.regions_.size()));
    if (inserted) {
      p.regions_.push_back(q);
      p.automaton_.push_back(a);
      p.accepting_.push_back(fsa.accepting(fsa.step(a, ts.label(q))));
      p.edges_.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  };

  std::deque<ProductState> work;
  intern(ts.initial(), fsa.initial(), work);
  while (!work.empty()) {
    const ProductState s = work.front();
    work.pop_front();
    if (options.stop_at_acceptance && p.accepting_[s]) continue;
    const Region q = p.regions_[s];
    const Fsa::State next_automaton = fsa.step(p.automaton_[s], ts.label(q));
    std::vector<ProductEdge> edges;
    for (std::size_t idx : ts.outgoing(q)) {
      const Transition& t = ts.transitions()[idx];
      edges.push_back({intern(t.to, next_automaton, work), t.action, t.weight});
    }
    std::sort(edges.begin(), edges.end(),
              [](const ProductEdge& a, const ProductEdge& b) { return a.to < b.to; });
    p.edges_[s] = std::move(edges);
  }
  return p;
}

namespace {

using Adjacency = std::vector<std::vector<std::pair<ProductState, double>>>;

std::vector<Distance> dijkstra(const Adjacency& adj, ProductState source) {
  std::vector<Distance> dist(adj.size());
  using Item = std::pair<double, ProductState>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = Distance(0.0);
  queue.push({0.0, source});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u].value()) continue;
    for (auto [v, w] : adj[u]) {
      const double nd = d + w;
      if (!dist[v].finite() || nd < dist[v].value()) {
        dist[v] = Distance(nd);
        queue.push({nd, v});
      }
    }
  }
  return dist;
}

Adjacency forward_adjacency(const ProductAutomaton& p) {
  Adjacency adj(p.state_count());
  for (ProductState s = 0; s < p.state_count(); ++s) {
    for (const auto& e : p.successors(s)) adj[s].emplace_back(e.to, e.weight);
  }
  return adj;
}

Adjacency reverse_adjacency(const ProductAutomaton& p) {
  Adjacency adj(p.state_count());
  for (ProductState s = 0; s < p.state_count(); ++s) {
    for (const auto& e : p.successors(s)) adj[e.to].emplace_back(s, e.weight);
  }
  return adj;
}

}  // namespace

std::vector<Distance> distances_from(const ProductAutomaton& p, ProductState source) {
  return dijkstra(forward_adjacency(p), source);
}

ProductState select_target(const ProductAutomaton& p) {
  const auto dist = distances_from(p, p.initial());
  std::optional<ProductState> best;
  for (ProductState s = 0; s < p.state_count(); ++s) {
    if (!p.accepting(s) || !dist[s].finite()) continue;
    if (!best || dist[s] > dist[*best]) best = s;
  }
  if (!best) {
    throw Error(ErrorCode::Infeasible, "specification infeasible: no accepting run is reachable");
  }
  return *best;
}

std::vector<Distance> compute_potential(const ProductAutomaton& p, ProductState target) {
  if (target >= p.state_count()) throw Error(ErrorCode::InvalidArgument, "target out of range");
  return dijkstra(reverse_adjacency(p), target);
}

ProductState prepare_potential(ProductAutomaton& p) {
  const ProductState target = select_target(p);
  p.attach_potential(target, compute_potential(p, target));
  return target;
}

std::vector<ProductState> reach_neighborhood(const ProductAutomaton& p, ProductState from,
                                             std::size_t n) {
  std::vector<std::size_t> hops(p.state_count(), SIZE_MAX);
  std::deque<ProductState> queue{from};
  hops.at(from) = 0;
  std::vector<ProductState> out;
  while (!queue.empty()) {
    const ProductState s = queue.front();
    queue.pop_front();
    out.push_back(s);
    if (hops[s] == n) continue;
    for (const auto& e : p.successors(s)) {
      if (hops[e.to] != SIZE_MAX) continue;
      hops[e.to] = hops[s] + 1;
      queue.push_back(e.to);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProductState> constrained_neighborhood(const ProductAutomaton& p, ProductState from,
                                                   std::size_t n) {
  const auto target = p.target();
  if (!target) throw Error(ErrorCode::InvalidArgument, "product has no target selected");
  auto ball = reach_neighborhood(p, from, n);
  if (std::binary_search(ball.begin(), ball.end(), *target)) return {*target};
  return ball;
}

std::vector<AcceptingRun> enumerate_accepting_runs(const ProductAutomaton& p, std::size_t limit) {
  // Prune states that cannot reach any accepting state.
  std::vector<bool> useful(p.state_count(), false);
  {
    const Adjacency rev = reverse_adjacency(p);
    std::deque<ProductState> queue;
    for (ProductState s = 0; s < p.state_count(); ++s) {
      if (p.accepting(s)) {
        useful[s] = true;
        queue.push_back(s);
      }
    }
    while (!queue.empty()) {
      const ProductState s = queue.front();
      queue.pop_front();
      for (auto [u, w] : rev[s]) {
        if (!useful[u]) {
          useful[u] = true;
          queue.push_back(u);
        }
      }
    }
  }

  std::vector<AcceptingRun> runs;
  if (!useful[p.initial()]) return runs;

  ProductPath path{p.initial()};
  std::vector<bool> on_path(p.state_count(), false);
  on_path[p.initial()] = true;

  std::function<void()> extend = [&] {
    const ProductState s = path.back();
    if (p.accepting(s)) {
      if (runs.size() >= limit) {
        throw Error(ErrorCode::InvalidArgument,
                    "more than " + std::to_string(limit) + " accepting runs");
      }
      runs.push_back({path, project(p, path)});
    }
    for (const auto& e : p.successors(s)) {
      if (on_path[e.to] || !useful[e.to]) continue;
      on_path[e.to] = true;
      path.push_back(e.to);
      extend();
      path.pop_back();
      on_path[e.to] = false;
    }
  };
  extend();
  return runs;
}

std::vector<ProductPath> finite_paths(const ProductAutomaton& p, ProductState from,
                                      std::size_t steps, std::span<const ProductState> forbidden) {
  std::vector<bool> blocked(p.state_count(), false);
  for (ProductState s : forbidden) blocked.at(s) = true;
  const auto target = p.target();

  std::vector<ProductPath> out;
  ProductPath path{from};
  std::function<void()> extend = [&] {
    const ProductState s = path.back();
    if (path.size() > 1 && target && s == *target) {
      out.push_back(path);
      return;
    }
    if (path.size() == steps + 1) {
      out.push_back(path);
      return;
    }
    for (const auto& e : p.successors(s)) {
      if (blocked[e.to]) continue;
      path.push_back(e.to);
      extend();
      path.pop_back();
    }
  };
  extend();
  return out;
}

std::vector<Region> project(const ProductAutomaton& p, std::span<const ProductState> path) {
  std::vector<Region> out;
  out.reserve(path.size());
  for (ProductState s : path) out.push_back(p.region(s));
  return out;
}

}  // namespace infoplan
