#pragma once

// Reference implementations used as oracles by the unit and acceptance
// tests. They share no code with the library beyond its data types.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "infoplan/belief.hpp"
#include "infoplan/graph_model.hpp"
#include "infoplan/scltl.hpp"

namespace oracle {

using namespace infoplan;

inline double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) h -= xlog2x(v);
  return h;
}

inline double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

// --- formulas --------------------------------------------------------------

// Direct recursive evaluation at position i of the finite word.
inline bool holds(const Formula& f, const std::vector<Letter>& w, std::size_t i) {
  const auto ops = f.operands();
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Atom:
      return w[i].has(f.atom_index());
    case FormulaKind::NegAtom:
      return !w[i].has(f.atom_index());
    case FormulaKind::And:
      for (const auto& g : ops) {
        if (!holds(g, w, i)) return false;
      }
      return true;
    case FormulaKind::Or:
      for (const auto& g : ops) {
        if (holds(g, w, i)) return true;
      }
      return false;
    case FormulaKind::Next:
      return i + 1 < w.size() && holds(ops[0], w, i + 1);
    case FormulaKind::Eventually:
      for (std::size_t j = i; j < w.size(); ++j) {
        if (holds(ops[0], w, j)) return true;
      }
      return false;
    case FormulaKind::Until:
      for (std::size_t j = i; j < w.size(); ++j) {
        if (holds(ops[1], w, j)) return true;
        if (!holds(ops[0], w, j)) return false;
      }
      return false;
  }
  return false;
}

// Random co-safe formula with the given atom count and maximum depth.
inline Formula random_formula(std::mt19937_64& rng, std::size_t atoms, std::size_t depth) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  if (depth <= 1) {
    switch (pick(6)) {
      case 0:
        return Formula::truth();
      case 1:
        return Formula::falsity();
      case 2:
      case 3:
        return Formula::atom(pick(atoms));
      default:
        return Formula::negated_atom(pick(atoms));
    }
  }
  switch (pick(8)) {
    case 0:
      return random_formula(rng, atoms, 1);
    case 1:
      return Formula::conjunction({random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)});
    case 2:
      return Formula::disjunction({random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)});
    case 3:
      return Formula::next(random_formula(rng, atoms, depth - 1));
    case 4:
      return Formula::eventually(random_formula(rng, atoms, depth - 1));
    default:
      return Formula::until(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
  }
}

inline std::vector<Letter> random_word(std::mt19937_64& rng, std::size_t atoms, std::size_t length) {
  std::vector<Letter> w;
  for (std::size_t i = 0; i < length; ++i) w.emplace_back(static_cast<std::uint32_t>(rng() % (1u << atoms)));
  return w;
}

// Calls fn on every word of length 1..max_length.
inline void for_each_word(std::size_t atoms, std::size_t max_length,
                          const std::function<void(const std::vector<Letter>&)>& fn) {
  const std::uint32_t letters = 1u << atoms;
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<std::uint32_t> digits(len, 0);
    while (true) {
      std::vector<Letter> w;
      for (auto d : digits) w.emplace_back(d);
      fn(w);
      std::size_t k = 0;
      while (k < len && ++digits[k] == letters) digits[k++] = 0;
      if (k == len) break;
    }
  }
}

// --- graphs ----------------------------------------------------------------

// Bellman-Ford distances to `target` over the product edges.
inline std::vector<double> distances_to(const ProductAutomaton& p, ProductState target) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(p.state_count(), inf);
  d[target] = 0.0;
  for (std::size_t round = 0; round < p.state_count(); ++round) {
    bool changed = false;
    for (ProductState s = 0; s < p.state_count(); ++s) {
      for (const auto& e : p.successors(s)) {
        if (d[e.to] + e.weight < d[s]) {
          d[s] = d[e.to] + e.weight;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return d;
}

// All walks of at most n transitions from s; returns the set of end states.
inline std::vector<bool> walk_ball(const ProductAutomaton& p, ProductState s, std::size_t n) {
  std::vector<bool> seen(p.state_count(), false);
  std::function<void(ProductState, std::size_t)> go = [&](ProductState u, std::size_t left) {
    seen[u] = true;
    if (left == 0) return;
    for (const auto& e : p.successors(u)) go(e.to, left - 1);
  };
  go(s, n);
  return seen;
}

// Grid transition system with unit weights; labels[q] names one atom or "".
inline TransitionSystem grid(const AtomSet& ap, std::size_t w, std::size_t h, Region start,
                             const std::vector<std::string>& labels, double dm = 1.0) {
  TransitionSystem ts(ap, w * h, start);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const auto q = static_cast<Region>(r * w + c);
      if (r > 0) ts.add_transition(q, "N", q - static_cast<Region>(w), 1.0);
      if (r + 1 < h) ts.add_transition(q, "S", q + static_cast<Region>(w), 1.0);
      if (c + 1 < w) ts.add_transition(q, "E", q + 1, 1.0);
      if (c > 0) ts.add_transition(q, "W", q - 1, 1.0);
      if (c + 1 < w) ts.set_measurement_distance(q, q + 1, dm);
      if (r + 1 < h) ts.set_measurement_distance(q, q + static_cast<Region>(w), dm);
      if (!labels.empty() && !labels[q].empty()) {
        ts.set_label(q, Letter(0).with(*ap.find(labels[q])));
      }
    }
  }
  return ts;
}

// --- sensing -----------------------------------------------------------------

struct Sensor {
  double mu0 = 0.9;
  double lambda = 0.01;
  double r = 0.01;
  // links[q] = (region, d_M) pairs of the observation neighborhood.
  std::vector<std::vector<std::pair<Region, double>>> links;
};

inline Sensor sensor_of(const TransitionSystem& ts, double mu0, double lambda, double r) {
  Sensor s{mu0, lambda, r, {}};
  s.links.resize(ts.region_count());
  for (Region q = 0; q < ts.region_count(); ++q) {
    for (Region j = 0; j < ts.region_count(); ++j) {
      if (auto d = ts.measurement_distance(q, j)) s.links[q].push_back({j, *d});
    }
  }
  return s;
}

// Pr(alert | world bits, robot at q), piecewise form.
inline double alarm(const Sensor& s, std::uint64_t world, Region q) {
  bool any = false;
  double miss = 1.0;
  for (auto [j, d] : s.links[q]) {
    if ((world >> j) & 1u) {
      any = true;
      miss *= 1.0 - s.mu0 * std::exp(-s.lambda * d);
    }
  }
  return any ? 1.0 - miss : s.r;
}

// E[H(posterior)] by enumerating every report sequence and every world.
inline double brute_expected_entropy(const Sensor& s, const std::vector<double>& prior,
                                     const std::vector<Region>& reports) {
  const std::size_t worlds = prior.size();
  const std::size_t k = reports.size();
  double total = 0.0;
  for (std::uint64_t ys = 0; ys < (std::uint64_t{1} << k); ++ys) {
    std::vector<double> joint(worlds);
    double py = 0.0;
    for (std::uint64_t w = 0; w < worlds; ++w) {
      double like = prior[w];
      for (std::size_t t = 0; t < k; ++t) {
        const double a = alarm(s, w, reports[t]);
        like *= ((ys >> t) & 1u) ? a : 1.0 - a;
      }
      joint[w] = like;
      py += like;
    }
    if (py <= 0.0) continue;
    for (double& v : joint) v /= py;
    total += py * entropy(joint);
  }
  return total;
}

}  // namespace oracle
