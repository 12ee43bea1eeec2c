#pragma once

// Weighted transition systems, their product with a specification automaton,
// the distance-to-target potential W and the path enumerators built on it.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infoplan/scltl.hpp"

namespace infoplan {

using Region = std::uint32_t;
using ActionId = std::uint32_t;

struct Transition {
  Region from;
  ActionId action;
  Region to;
  double weight;
};

/// An observation link: information about `region` reaches a robot standing
/// in the neighborhood owner, attenuated by `distance` (d_M).
struct ObservationLink {
  Region region;
  double distance;
};

/// Deterministic weighted transition system TS = (Q, q0, Act, Trans, AP, L, d)
/// plus the symmetric measurement distances d_M over E_meas.
class TransitionSystem {
 public:
  TransitionSystem(AtomSet atoms, std::size_t region_count, Region initial);

  const AtomSet& atoms() const noexcept { return atoms_; }
  std::size_t region_count() const noexcept { return labels_.size(); }
  Region initial() const noexcept { return initial_; }

  const std::string& region_name(Region q) const { return names_.at(q); }
  void set_region_name(Region q, std::string name);

  Letter label(Region q) const { return labels_.at(q); }
  void set_label(Region q, Letter letter);

  const std::vector<std::string>& actions() const noexcept { return actions_; }
  ActionId action_id(const std::string& name);

  /// Throws if (from, action) already has a successor or weight < 0.
  void add_transition(Region from, const std::string& action, Region to, double weight);
  std::span<const Transition> transitions() const noexcept { return transitions_; }
  /// Indices into transitions(), in insertion order.
  std::span<const std::size_t> outgoing(Region q) const { return outgoing_.at(q); }

  /// Symmetric; a self pair is always present with distance 0.
  void set_measurement_distance(Region a, Region b, double distance);
  std::optional<double> measurement_distance(Region a, Region b) const;
  const std::map<std::pair<Region, Region>, double>& measurement_links() const noexcept {
    return measurement_;
  }

  /// N_o(q): q itself (distance 0) and every region linked to q in E_meas,
  /// sorted by region index.
  std::vector<ObservationLink> observation_neighborhood(Region q) const;

  /// Checks the structural invariants, including that every transition's
  /// endpoints are linked in E_meas. Throws InvalidArgument.
  void validate() const;

 private:
  void check_region(Region q) const;

  AtomSet atoms_;
  Region initial_;
  std::vector<std::string> names_;
  std::vector<Letter> labels_;
  std::vector<std::string> actions_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::map<std::pair<Region, Region>, double> measurement_;  // key: (min, max)
};

std::vector<Letter> label_word(const TransitionSystem& ts, std::span<const Region> regions);

/// Shortest-path distance with a dedicated unreachable value.
class Distance {
 public:
  constexpr Distance() = default;  // unreachable
  constexpr explicit Distance(double value) : value_(value), reachable_(true) {}
  static constexpr Distance unreachable() { return Distance(); }

  constexpr bool finite() const noexcept { return reachable_; }
  constexpr double value() const noexcept {
    return reachable_ ? value_ : std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(Distance a, Distance b) {
    return a.reachable_ == b.reachable_ && (!a.reachable_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(Distance a, Distance b) {
    if (a.reachable_ != b.reachable_) {
      return a.reachable_ ? std::partial_ordering::less : std::partial_ordering::greater;
    }
    if (!a.reachable_) return std::partial_ordering::equivalent;
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool reachable_ = false;
};

using ProductState = std::uint32_t;

struct ProductEdge {
  ProductState to;
  ActionId action;
  double weight;
};

struct ProductOptions {
  /// Accepting product states are materialized but not expanded, so every
  /// run ends at its first acceptance.
  bool stop_at_acceptance = true;
};

/// Reachable part of TS x A. A product state (q, s) is accepting when reading
/// L(q) from s enters an accepting automaton state, i.e. the run's own final
/// label completes the word.
class ProductAutomaton {
 public:
  std::size_t state_count() const noexcept { return regions_.size(); }
  ProductState initial() const noexcept { return 0; }
  Region region(ProductState s) const { return regions_.at(s); }
  Fsa::State automaton_state(ProductState s) const { return automaton_.at(s); }
  bool accepting(ProductState s) const { return accepting_.at(s); }
  std::optional<ProductState> find(Region q, Fsa::State a) const;

  /// Sorted by target state index.
  std::span<const ProductEdge> successors(ProductState s) const { return edges_.at(s); }

  const TransitionSystem& transition_system() const noexcept { return ts_; }
  const Fsa& automaton() const noexcept { return fsa_; }
  const ProductOptions& options() const noexcept { return options_; }

  /// Set by select_target / attach_potential.
  std::optional<ProductState> target() const noexcept { return target_; }
  Distance potential(ProductState s) const;
  const std::vector<Distance>& potential_table() const noexcept { return potential_; }

  /// Stores the target and its W table (as returned by compute_potential).
  void attach_potential(ProductState target, std::vector<Distance> table);

 private:
  friend ProductAutomaton build_product(const TransitionSystem&, const Fsa&, ProductOptions);

  ProductAutomaton(TransitionSystem ts, Fsa fsa, ProductOptions options)
      : ts_(std::move(ts)), fsa_(std::move(fsa)), options_(options) {}

  TransitionSystem ts_;
  Fsa fsa_;
  ProductOptions options_;
  std::vector<Region> regions_;
  std::vector<Fsa::State> automaton_;
  std::vector<bool> accepting_;
  std::vector<std::vector<ProductEdge>> edges_;
  std::map<std::pair<Region, Fsa::State>, ProductState> index_;
  std::optional<ProductState> target_;
  std::vector<Distance> potential_;
};

/// Throws InvalidArgument when the atom orderings differ.
ProductAutomaton build_product(const TransitionSystem& ts, const Fsa& fsa,
                               ProductOptions options = {});

/// Single-source weighted shortest paths over the product edges.
std::vector<Distance> distances_from(const ProductAutomaton& p, ProductState source);

/// Reachable accepting state farthest from the initial state (ties: smallest
/// index). Throws Infeasible when no accepting state is reachable.
ProductState select_target(const ProductAutomaton& p);

/// W(x) = D(x, target), computed on the reversed graph.
std::vector<Distance> compute_potential(const ProductAutomaton& p, ProductState target);

/// select_target + compute_potential, stored on `p`. Returns the target.
ProductState prepare_potential(ProductAutomaton& p);

/// States reachable in at most n transitions (hop count), sorted.
std::vector<ProductState> reach_neighborhood(const ProductAutomaton& p, ProductState from,
                                             std::size_t n);

/// {target} when the target lies in the n-step neighborhood, else the
/// neighborhood itself. Requires an attached target.
std::vector<ProductState> constrained_neighborhood(const ProductAutomaton& p, ProductState from,
                                                   std::size_t n);

using ProductPath = std::vector<ProductState>;

struct AcceptingRun {
  ProductPath states;
  std::vector<Region> regions;  // projection onto TS
};

/// All simple paths from the initial state to accepting states in
/// lexicographic order of state indices. Throws InvalidArgument once more
/// than `limit` runs have been found.
std::vector<AcceptingRun> enumerate_accepting_runs(const ProductAutomaton& p,
                                                   std::size_t limit = 5'000'000);

/// Paths of exactly `steps` transitions from `from` whose states after the
/// first avoid `forbidden`. A path that reaches the attached target stops
/// there, possibly early. Lexicographic order.
std::vector<ProductPath> finite_paths(const ProductAutomaton& p, ProductState from,
                                      std::size_t steps, std::span<const ProductState> forbidden);

std::vector<Region> project(const ProductAutomaton& p, std::span<const ProductState> path);

}  // namespace infoplan
