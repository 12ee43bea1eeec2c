#pragma once

// Syntactically co-safe LTL: formulas, finite-word semantics and translation
// into a complete deterministic automaton via formula progression.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infoplan {

/// Ordered set of atomic propositions. Declaration order fixes the bit layout
/// of every Letter built over it.
class AtomSet {
 public:
  static constexpr std::size_t kMaxAtoms = 16;

  AtomSet() = default;
  explicit AtomSet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t letter_count() const noexcept { return std::size_t{1} << names_.size(); }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  std::vector<std::string> names_;
};

/// A set of atomic propositions, one bit per atom in AtomSet order.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr explicit Letter(std::uint32_t bits) : bits_(bits) {}

  constexpr std::uint32_t bits() const noexcept { return bits_; }
  constexpr bool has(std::size_t atom) const noexcept { return (bits_ >> atom) & 1u; }
  constexpr Letter with(std::size_t atom) const noexcept { return Letter(bits_ | (1u << atom)); }

  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Builds a letter from atom names; throws on names missing from `ap`.
Letter make_letter(const AtomSet& ap, std::span<const std::string> atoms);
std::string letter_to_string(const AtomSet& ap, Letter letter);

enum class FormulaKind : std::uint8_t {
  True,
  False,
  Atom,
  NegAtom,
  And,
  Or,
  Next,
  Eventually,
  Until,
};

/// Immutable co-safe formula. Negation only appears on atoms; And/Or are
/// binary when parsed and n-ary after normalization. Copies share structure.
class Formula {
 public:
  static Formula truth();
  static Formula falsity();
  static Formula atom(std::size_t index);
  static Formula negated_atom(std::size_t index);
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(std::vector<Formula> operands);
  static Formula next(Formula operand);
  static Formula eventually(Formula operand);
  static Formula until(Formula hold, Formula goal);

  FormulaKind kind() const noexcept;
  /// Atom index; only meaningful for Atom / NegAtom.
  std::size_t atom_index() const noexcept;
  std::span<const Formula> operands() const noexcept;

  /// Node count.
  std::size_t size() const noexcept;
  std::size_t depth() const noexcept;

  /// Structural total order (kind, atom, operands lexicographically).
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);
  friend bool operator==(const Formula& a, const Formula& b);

 struct Node;  // defined in scltl.cpp

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Fully parenthesized text that parse_formula accepts back.
std::string to_string(const Formula& f, const AtomSet& ap);

/// Grammar (precedence ! > X,F > U > & > |, U right-associative):
///   formula := or ; or := and ('|' and)* ; and := until ('&' until)*
///   until := unary ('U' unary)* ; unary := '!' atom | 'X' unary | 'F' unary
///          | atom | 'true' | 'false' | '(' formula ')'
/// Throws ParseError carrying the 0-based offset of the offending token.
Formula parse_formula(std::string_view text, const AtomSet& ap);

/// Finite-trace semantics with strong next, evaluated at position 0.
/// Throws InvalidArgument on an empty word.
bool word_satisfies(const Formula& f, std::span<const Letter> word);

/// Canonical form: temporal operands normalized recursively, Boolean structure
/// rewritten into sorted, absorbed disjunctive normal form with constants
/// folded and p & !p clauses dropped.
Formula normalize(const Formula& f);

/// Result of consuming one letter.
///  - Accepted: every continuation (including none) satisfies the formula.
///  - Rejected: no continuation does.
///  - Pending: at least one more letter is required, and the remaining
///    suffix must satisfy `obligation` from its first position.
class Residual {
 public:
  enum class Status : std::uint8_t { Accepted, Rejected, Pending };

  static Residual accepted() { return Residual(Status::Accepted, Formula::truth()); }
  static Residual rejected() { return Residual(Status::Rejected, Formula::falsity()); }
  static Residual pending(Formula obligation);

  Status status() const noexcept { return status_; }
  bool is_accepted() const noexcept { return status_ == Status::Accepted; }
  bool is_rejected() const noexcept { return status_ == Status::Rejected; }
  /// True for Accepted, False for Rejected, the obligation otherwise.
  const Formula& formula() const noexcept { return formula_; }

  friend bool operator==(const Residual&, const Residual&) = default;

 private:
  Residual(Status s, Formula f) : status_(s), formula_(std::move(f)) {}
  Status status_;
  Formula formula_;
};

Residual progress(const Formula& f, Letter letter);

/// Complete deterministic automaton over 2^AP.
class Fsa {
 public:
  using State = std::uint32_t;

  const AtomSet& atoms() const noexcept { return atoms_; }
  std::size_t state_count() const noexcept { return labels_.size(); }
  State initial() const noexcept { return initial_; }
  bool accepting(State s) const { return accepting_.at(s); }
  State step(State s, Letter letter) const { return delta_.at(s * atoms_.letter_count() + letter.bits()); }
  /// Residual obligation text; "accept" / "reject" for the two sinks.
  const std::string& label(State s) const { return labels_.at(s); }
  std::optional<State> rejecting_sink() const noexcept { return sink_; }

  State run(std::span<const Letter> word) const;
  /// Words are nonempty; an empty word throws InvalidArgument.
  bool accepts(std::span<const Letter> word) const;

 private:
  friend Fsa translate(const Formula& f, const AtomSet& ap);
  AtomSet atoms_;
  State initial_ = 0;
  std::vector<std::string> labels_;
  std::vector<bool> accepting_;
  std::vector<State> delta_;
  std::optional<State> sink_;
};

Fsa translate(const Formula& f, const AtomSet& ap);

/// Graphviz rendering. Edges between the same pair of states are merged and
/// labelled by their letters.
std::string to_dot(const Fsa& fsa);

}  // namespace infoplan
