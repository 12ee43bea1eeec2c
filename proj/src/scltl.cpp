#include "infoplan/scltl.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <utility>

#include "infoplan/error.hpp"

namespace infoplan {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

AtomSet::AtomSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxAtoms) {
    throw Error(ErrorCode::InvalidArgument,
                "at most " + std::to_string(kMaxAtoms) + " atomic propositions are supported");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (!is_identifier(n) || n == "true" || n == "false") {
      throw Error(ErrorCode::InvalidArgument, "invalid atomic proposition name '" + n + "'");
    }
    if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(i), n) !=
        names_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw Error(ErrorCode::InvalidArgument, "duplicate atomic proposition '" + n + "'");
    }
  }
}

std::optional<std::size_t> AtomSet::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Letter make_letter(const AtomSet& ap, std::span<const std::string> atoms) {
  Letter l;
  for (const auto& a : atoms) {
    auto idx = ap.find(a);
    if (!idx) throw Error(ErrorCode::InvalidArgument, "undeclared atomic proposition '" + a + "'");
    l = l.with(*idx);
  }
  return l;
}

std::string letter_to_string(const AtomSet& ap, Letter letter) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < ap.size(); ++i) {
    if (!letter.has(i)) continue;
    if (!first) out += ',';
    out += ap.name(i);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  FormulaKind kind;
  std::size_t atom = 0;
  std::vector<Formula> operands;
  std::size_t size = 1;
  std::size_t depth = 1;
};

namespace {

Formula::Node compose(FormulaKind kind, std::vector<Formula> operands, std::size_t atom = 0) {
  Formula::Node n{kind, atom, std::move(operands), 1, 1};
  for (const auto& o : n.operands) {
    n.size += o.size();
    n.depth = std::max(n.depth, o.depth() + 1);
  }
  return n;
}

}  // namespace

Formula Formula::truth() {
  static const Formula t(std::make_shared<const Node>(compose(FormulaKind::True, {})));
  return t;
}

Formula Formula::falsity() {
  static const Formula f(std::make_shared<const Node>(compose(FormulaKind::False, {})));
  return f;
}

Formula Formula::atom(std::size_t index) {
  return Formula(std::make_shared<const Node>(compose(FormulaKind::Atom, {}, index)));
}

Formula Formula::negated_atom(std::size_t index) {
  return Formula(std::make_shared<const Node>(compose(FormulaKind::NegAtom, {}, index)));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
  if (operands.empty()) return truth();
  if (operands.size() == 1) return operands.front();
  return Formula(std::make_shared<const Node>(compose(FormulaKind::And, std::move(operands))));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
  if (operands.empty()) return falsity();
  if (operands.size() == 1) return operands.front();
  return Formula(std::make_shared<const Node>(compose(FormulaKind::Or, std::move(operands))));
}

Formula Formula::next(Formula operand) {
  return Formula(std::make_shared<const Node>(compose(FormulaKind::Next, {std::move(operand)})));
}

Formula Formula::eventually(Formula operand) {
  return Formula(
      std::make_shared<const Node>(compose(FormulaKind::Eventually, {std::move(operand)})));
}

Formula Formula::until(Formula hold, Formula goal) {
  return Formula(std::make_shared<const Node>(
      compose(FormulaKind::Until, {std::move(hold), std::move(goal)})));
}

FormulaKind Formula::kind() const noexcept { return node_->kind; }
std::size_t Formula::atom_index() const noexcept { return node_->atom; }
std::span<const Formula> Formula::operands() const noexcept { return node_->operands; }
std::size_t Formula::size() const noexcept { return node_->size; }
std::size_t Formula::depth() const noexcept { return node_->depth; }

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.atom_index() <=> b.atom_index(); c != 0) return c;
  const auto ao = a.operands();
  const auto bo = b.operands();
  return std::lexicographical_compare_three_way(ao.begin(), ao.end(), bo.begin(), bo.end());
}

bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

std::string to_string(const Formula& f, const AtomSet& ap) {
  auto join = [&](std::string_view sep) {
    std::string out = "(";
    bool first = true;
    for (const auto& o : f.operands()) {
      if (!first) out += sep;
      out += to_string(o, ap);
      first = false;
    }
    return out + ")";
  };
  switch (f.kind()) {
    case FormulaKind::True: return "true";
    case FormulaKind::False: return "false";
    case FormulaKind::Atom: return ap.name(f.atom_index());
    case FormulaKind::NegAtom: return "!" + ap.name(f.atom_index());
    case FormulaKind::And: return join(" & ");
    case FormulaKind::Or: return join(" | ");
    case FormulaKind::Next: return "X " + to_string(f.operands()[0], ap);
    case FormulaKind::Eventually: return "F " + to_string(f.operands()[0], ap);
    case FormulaKind::Until:
      return "(" + to_string(f.operands()[0], ap) + " U " + to_string(f.operands()[1], ap) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { LParen, RParen, Not, And, Or, Ident, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, i, "("}); ++i; continue;
      case ')': out.push_back({Tok::RParen, i, ")"}); ++i; continue;
      case '!': out.push_back({Tok::Not, i, "!"}); ++i; continue;
      case '&': out.push_back({Tok::And, i, "&"}); ++i; continue;
      case '|': out.push_back({Tok::Or, i, "|"}); ++i; continue;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::Ident, i, std::string(text.substr(i, j - i))});
      i = j;
      continue;
    }
    throw ParseError(i, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, text.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const AtomSet& ap) : tokens_(tokenize(text)), ap_(ap) {}

  Formula parse() {
    Formula f = parse_or();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().pos, msg); }

  bool is_keyword(const Token& t, std::string_view kw) const {
    return t.kind == Tok::Ident && t.text == kw;
  }

  // X, F and U double as atom names when declared (the standard scenario uses
  // an atom called U); context decides which reading applies.
  bool starts_operand(const Token& t) const {
    if (t.kind == Tok::Not || t.kind == Tok::LParen) return true;
    if (t.kind != Tok::Ident) return false;
    if (t.text == "U") return ap_.find("U").has_value();
    return true;
  }

  Formula atom_named(const Token& t, bool negated) const {
    auto idx = ap_.find(t.text);
    if (!idx) throw ParseError(t.pos, "undeclared atom '" + t.text + "'");
    return negated ? Formula::negated_atom(*idx) : Formula::atom(*idx);
  }

  Formula parse_or() {
    std::vector<Formula> ops{parse_and()};
    while (peek().kind == Tok::Or) {
      advance();
      ops.push_back(parse_and());
    }
    return fold(FormulaKind::Or, std::move(ops));
  }

  Formula parse_and() {
    std::vector<Formula> ops{parse_until()};
    while (peek().kind == Tok::And) {
      advance();
      ops.push_back(parse_until());
    }
    return fold(FormulaKind::And, std::move(ops));
  }

  // Left fold into binary nodes.
  static Formula fold(FormulaKind kind, std::vector<Formula> ops) {
    Formula acc = ops.front();
    for (std::size_t i = 1; i < ops.size(); ++i) {
      acc = kind == FormulaKind::And ? Formula::conjunction({acc, ops[i]})
                                     : Formula::disjunction({acc, ops[i]});
    }
    return acc;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (is_keyword(peek(), "U")) {
      advance();
      return Formula::until(std::move(lhs), parse_until());
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: {
        advance();
        const Token& operand = peek();
        if (operand.kind != Tok::Ident || operand.text == "true" || operand.text == "false") {
          fail("negation may only be applied to an atom");
        }
        advance();
        return atom_named(operand, true);
      }
      case Tok::LParen: {
        advance();
        Formula f = parse_or();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        advance();
        return f;
      }
      case Tok::Ident: break;
      default: fail(t.kind == Tok::End ? "unexpected end of formula" : "expected operand");
    }
    if (t.text == "true") {
      advance();
      return Formula::truth();
    }
    if (t.text == "false") {
      advance();
      return Formula::falsity();
    }
    if (t.text == "X" || t.text == "F") {
      if (starts_operand(peek(1))) {
        const bool next = t.text == "X";
        advance();
        Formula operand = parse_unary();
        return next ? Formula::next(std::move(operand)) : Formula::eventually(std::move(operand));
      }
      if (!ap_.find(t.text)) fail("operator '" + t.text + "' is missing its operand");
    }
    if (t.text == "U" && !ap_.find("U")) fail("'U' is missing its left operand");
    advance();
    return atom_named(t, false);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const AtomSet& ap_;
};

}  // namespace

Formula parse_formula(std::string_view text, const AtomSet& ap) { return Parser(text, ap).parse(); }

// ---------------------------------------------------------------------------
// Finite-word semantics

namespace {

bool holds(const Formula& f, std::span<const Letter> w, std::size_t i) {
  const auto ops = f.operands();
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: return w[i].has(f.atom_index());
    case FormulaKind::NegAtom: return !w[i].has(f.atom_index());
    case FormulaKind::And:
      return std::all_of(ops.begin(), ops.end(), [&](const Formula& o) { return holds(o, w, i); });
    case FormulaKind::Or:
      return std::any_of(ops.begin(), ops.end(), [&](const Formula& o) { return holds(o, w, i); });
    case FormulaKind::Next: return i + 1 < w.size() && holds(ops[0], w, i + 1);
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

}  // namespace

bool word_satisfies(const Formula& f, std::span<const Letter> word) {
  if (word.empty()) throw Error(ErrorCode::InvalidArgument, "word_satisfies: empty word");
  return holds(f, word, 0);
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

using Clause = std::vector<Formula>;  // sorted, unique leaves; empty = true
using Dnf = std::vector<Clause>;      // sorted, absorbed; empty = false

bool contradictory(const Clause& c) {
  for (const auto& leaf : c) {
    if (leaf.kind() != FormulaKind::Atom) continue;
    const auto idx = leaf.atom_index();
    if (std::any_of(c.begin(), c.end(), [&](const Formula& o) {
          return o.kind() == FormulaKind::NegAtom && o.atom_index() == idx;
        })) {
      return true;
    }
  }
  return false;
}

Dnf absorb(Dnf d) {
  std::sort(d.begin(), d.end(), [](const Clause& a, const Clause& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  d.erase(std::unique(d.begin(), d.end()), d.end());
  Dnf kept;
  for (auto& c : d) {
    const bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const Clause& k) {
      return std::includes(c.begin(), c.end(), k.begin(), k.end());
    });
    if (!subsumed) kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

Dnf dnf_or(Dnf a, const Dnf& b) {
  a.insert(a.end(), b.begin(), b.end());
  return absorb(std::move(a));
}

Dnf dnf_and(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      Clause merged;
      std::set_union(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(merged));
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      if (!contradictory(merged)) out.push_back(std::move(merged));
    }
  }
  return absorb(std::move(out));
}

const Dnf kTrueDnf{Clause{}};
const Dnf kFalseDnf{};

Formula rebuild(const Dnf& d) {
  std::vector<Formula> disjuncts;
  disjuncts.reserve(d.size());
  for (const auto& c : d) disjuncts.push_back(Formula::conjunction(c));
  return Formula::disjunction(std::move(disjuncts));
}

Dnf to_dnf(const Formula& f);

Dnf leaf(Formula f) { return Dnf{Clause{std::move(f)}}; }

Dnf to_dnf(const Formula& f) {
  const auto ops = f.operands();
  switch (f.kind()) {
    case FormulaKind::True: return kTrueDnf;
    case FormulaKind::False: return kFalseDnf;
    case FormulaKind::Atom:
    case FormulaKind::NegAtom: return leaf(f);
    case FormulaKind::And: {
      Dnf acc = kTrueDnf;
      for (const auto& o : ops) {
        acc = dnf_and(acc, to_dnf(o));
        if (acc.empty()) break;
      }
      return acc;
    }
    case FormulaKind::Or: {
      Dnf acc = kFalseDnf;
      for (const auto& o : ops) acc = dnf_or(std::move(acc), to_dnf(o));
      return acc;
    }
    case FormulaKind::Next: {
      Formula inner = normalize(ops[0]);
      if (inner.kind() == FormulaKind::False) return kFalseDnf;
      return leaf(Formula::next(std::move(inner)));
    }
    case FormulaKind::Eventually: {
      Formula inner = normalize(ops[0]);
      if (inner.kind() == FormulaKind::True) return kTrueDnf;
      if (inner.kind() == FormulaKind::False) return kFalseDnf;
      return leaf(Formula::eventually(std::move(inner)));
    }
    case FormulaKind::Until: {
      Formula hold = normalize(ops[0]);
      Formula goal = normalize(ops[1]);
      if (goal.kind() == FormulaKind::True) return kTrueDnf;
      if (goal.kind() == FormulaKind::False) return kFalseDnf;
      if (hold.kind() == FormulaKind::False) return to_dnf(goal);
      if (hold.kind() == FormulaKind::True) return leaf(Formula::eventually(std::move(goal)));
      return leaf(Formula::until(std::move(hold), std::move(goal)));
    }
  }
  return kFalseDnf;
}

}  // namespace

Formula normalize(const Formula& f) { return rebuild(to_dnf(f)); }

// ---------------------------------------------------------------------------
// Progression

Residual Residual::pending(Formula obligation) {
  Formula n = normalize(obligation);
  if (n.kind() == FormulaKind::False) return rejected();
  return Residual(Status::Pending, std::move(n));
}

namespace {

Residual step_or(const Residual& a, const Residual& b) {
  if (a.is_accepted() || b.is_accepted()) return Residual::accepted();
  if (a.is_rejected()) return b;
  if (b.is_rejected()) return a;
  return Residual::pending(Formula::disjunction({a.formula(), b.formula()}));
}

Residual step_and(const Residual& a, const Residual& b) {
  if (a.is_rejected() || b.is_rejected()) return Residual::rejected();
  if (a.is_accepted()) return b;
  if (b.is_accepted()) return a;
  return Residual::pending(Formula::conjunction({a.formula(), b.formula()}));
}

}  // namespace

Residual progress(const Formula& f, Letter letter) {
  const auto ops = f.operands();
  switch (f.kind()) {
    case FormulaKind::True: return Residual::accepted();
    case FormulaKind::False: return Residual::rejected();
    case FormulaKind::Atom:
      return letter.has(f.atom_index()) ? Residual::accepted() : Residual::rejected();
    case FormulaKind::NegAtom:
      return letter.has(f.atom_index()) ? Residual::rejected() : Residual::accepted();
    case FormulaKind::And: {
      Residual acc = Residual::accepted();
      for (const auto& o : ops) {
        acc = step_and(acc, progress(o, letter));
        if (acc.is_rejected()) break;
      }
      return acc;
    }
    case FormulaKind::Or: {
      Residual acc = Residual::rejected();
      for (const auto& o : ops) {
        acc = step_or(acc, progress(o, letter));
        if (acc.is_accepted()) break;
      }
      return acc;
    }
    case FormulaKind::Next: return Residual::pending(ops[0]);
    case FormulaKind::Eventually:
      return step_or(progress(ops[0], letter), Residual::pending(f));
    case FormulaKind::Until:
      return step_or(progress(ops[1], letter),
                     step_and(progress(ops[0], letter), Residual::pending(f)));
  }
  return Residual::rejected();
}

// ---------------------------------------------------------------------------
// Translation

Fsa::State Fsa::run(std::span<const Letter> word) const {
  State s = initial_;
  for (Letter l : word) s = step(s, l);
  return s;
}

bool Fsa::accepts(std::span<const Letter> word) const {
  if (word.empty()) throw Error(ErrorCode::InvalidArgument, "Fsa::accepts: empty word");
  return accepting(run(word));
}

Fsa translate(const Formula& f, const AtomSet& ap) {
  Fsa fsa;
  fsa.atoms_ = ap;
  const std::size_t letters = ap.letter_count();

  std::map<std::string, Fsa::State> index;
  std::vector<Residual> residuals;
  std::deque<Fsa::State> work;

  auto key_of = [&](const Residual& r) -> std::string {
    switch (r.status()) {
      case Residual::Status::Accepted: return "accept";
      case Residual::Status::Rejected: return "reject";
      case Residual::Status::Pending: break;
    }
    return to_string(r.formula(), ap);
  };
  auto intern = [&](const Residual& r) {
    const std::string key = key_of(r);
    if (auto it = index.find(key); it != index.end()) return it->second;
    const auto id = static_cast<Fsa::State>(residuals.size());
    index.emplace(key, id);
    residuals.push_back(r);
    fsa.labels_.push_back(key);
    fsa.accepting_.push_back(r.is_accepted());
    if (r.is_rejected()) fsa.sink_ = id;
    work.push_back(id);
    return id;
  };

  // Words are nonempty, so a formula that folds to a constant can start in the
  // matching sink directly.
  const Formula start = normalize(f);
  Residual initial = start.kind() == FormulaKind::True    ? Residual::accepted()
                     : start.kind() == FormulaKind::False ? Residual::rejected()
                                                          : Residual::pending(start);
  fsa.initial_ = intern(initial);

  std::vector<std::vector<Fsa::State>> rows;
  while (!work.empty()) {
    const Fsa::State s = work.front();
    work.pop_front();
    const Residual r = residuals[s];
    std::vector<Fsa::State> row(letters, s);
    if (r.status() == Residual::Status::Pending) {
      for (std::uint32_t bits = 0; bits < letters; ++bits) {
        row[bits] = intern(progress(r.formula(), Letter(bits)));
      }
    }
    if (rows.size() <= s) rows.resize(s + 1);
    rows[s] = std::move(row);
  }
  for (const auto& row : rows) fsa.delta_.insert(fsa.delta_.end(), row.begin(), row.end());
  return fsa;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Fsa& fsa) {
  std::ostringstream os;
  os << "digraph fsa {\n  rankdir=LR;\n  init [shape=point];\n";
  for (Fsa::State s = 0; s < fsa.state_count(); ++s) {
    os << "  s" << s << " [shape=" << (fsa.accepting(s) ? "doublecircle" : "circle")
       << ", label=\"" << dot_escape(fsa.label(s)) << "\"];\n";
  }
  os << "  init -> s" << fsa.initial() << ";\n";
  const std::size_t letters = fsa.atoms().letter_count();
  for (Fsa::State s = 0; s < fsa.state_count(); ++s) {
    std::map<Fsa::State, std::vector<std::string>> grouped;
    for (std::uint32_t bits = 0; bits < letters; ++bits) {
      grouped[fsa.step(s, Letter(bits))].push_back(letter_to_string(fsa.atoms(), Letter(bits)));
    }
    for (const auto& [t, ls] : grouped) {
      std::string label;
      if (ls.size() == letters) {
        label = "*";
      } else {
        for (std::size_t i = 0; i < ls.size(); ++i) label += (i ? " " : "") + ls[i];
      }
      os << "  s" << s << " -> s" << t << " [label=\"" << dot_escape(label) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace infoplan
