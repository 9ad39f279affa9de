#include "epsdiag/formula.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <vector>

namespace epsdiag {

struct Formula::Node {
  Connective kind;
  std::string name;
  Formula lhs{nullptr};
  Formula rhs{nullptr};
};

namespace {

int precedence(Connective c) {
  switch (c) {
    case Connective::Iff: return 1;
    case Connective::Implies: return 2;
    case Connective::Or: return 3;
    case Connective::And: return 4;
    case Connective::Not: return 5;
    default: return 6;
  }
}

const char* symbol(Connective c) {
  switch (c) {
    case Connective::Iff: return "<->";
    case Connective::Implies: return "->";
    case Connective::Or: return "|";
    case Connective::And: return "&";
    default: return "?";
  }
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = equiv();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(1, pos_ + 1, what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  using Build = Formula (*)(Formula, Formula);

  // Right fold of a flat chain: x1 op (x2 op (... op xk)).
  static Formula fold_right(std::vector<Formula>& items, Build build) {
    Formula acc = items.back();
    for (auto it = items.rbegin() + 1; it != items.rend(); ++it) acc = build(*it, acc);
    return acc;
  }

  Formula equiv() {
    std::vector<Formula> items{impl()};
    while (accept("<->")) items.push_back(impl());
    return fold_right(items, &Formula::equivalence);
  }

  Formula impl() {
    Formula lhs = disj();
    // "<->" starts with '<', so a lone "->" check cannot swallow it.
    if (accept("->")) return Formula::implication(lhs, impl());
    return lhs;
  }

  Formula disj() {
    std::vector<Formula> items{conj()};
    while (accept("|")) items.push_back(conj());
    return fold_right(items, &Formula::disjunction);
  }

  Formula conj() {
    std::vector<Formula> items{unary()};
    while (accept("&")) items.push_back(unary());
    return fold_right(items, &Formula::conjunction);
  }

  Formula unary() {
    skip_space();
    if (pos_ == text_.size()) fail("unexpected end of formula");
    if (accept("~")) return Formula::negation(unary());
    if (accept("(")) {
      Formula inner = equiv();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    if (!is_ident_start(text_[pos_])) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    std::string word(text_.substr(start, pos_ - start));
    if (word == "true") return Formula::top();
    if (word == "false") return Formula::bottom();
    return Formula::atom(std::move(word));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print(const Formula& f, std::ostream& os) {
  const int prec = precedence(f.kind());
  auto sub = [&os](const Formula& g, bool parens) {
    if (parens) os << '(';
    print(g, os);
    if (parens) os << ')';
  };
  switch (f.kind()) {
    case Connective::True: os << "true"; return;
    case Connective::False: os << "false"; return;
    case Connective::Atom: os << f.name(); return;
    case Connective::Not:
      os << '~';
      sub(f.child(), precedence(f.child().kind()) < prec);
      return;
    default:
      sub(f.left(), precedence(f.left().kind()) <= prec);
      os << ' ' << symbol(f.kind()) << ' ';
      sub(f.right(), precedence(f.right().kind()) < prec);
  }
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::True:
    case Connective::False: return;
    case Connective::Atom: out.insert(f.name()); return;
    case Connective::Not: collect_atoms(f.child(), out); return;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
  }
}

}  // namespace

Formula::Formula() {
  static const auto truth = std::make_shared<const Node>(Node{Connective::True, {}});
  node_ = truth;
}

Formula Formula::top() { return Formula(); }

Formula Formula::bottom() {
  static const auto falsity = std::make_shared<const Node>(Node{Connective::False, {}});
  return Formula(falsity);
}

Formula Formula::atom(std::string name) {
  if (name.empty() || !is_ident_start(name.front()))
    throw std::invalid_argument("invalid atom name '" + name + "'");
  for (char c : name)
    if (!is_ident_char(c)) throw std::invalid_argument("invalid atom name '" + name + "'");
  if (name == "true" || name == "false")
    throw std::invalid_argument("'" + name + "' is reserved");
  return Formula(std::make_shared<const Node>(Node{Connective::Atom, std::move(name)}));
}

Formula Formula::negation(Formula child) {
  return Formula(std::make_shared<const Node>(Node{Connective::Not, {}, std::move(child)}));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(
      std::make_shared<const Node>(Node{Connective::And, {}, std::move(left), std::move(right)}));
}

Formula Formula::disjunction(Formula left, Formula right) {
  return Formula(
      std::make_shared<const Node>(Node{Connective::Or, {}, std::move(left), std::move(right)}));
}

Formula Formula::implication(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::Implies, {}, std::move(left), std::move(right)}));
}

Formula Formula::equivalence(Formula left, Formula right) {
  return Formula(
      std::make_shared<const Node>(Node{Connective::Iff, {}, std::move(left), std::move(right)}));
}

Connective Formula::kind() const { return node_->kind; }

bool Formula::is_binary() const {
  switch (kind()) {
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
    case Connective::Iff: return true;
    default: return false;
  }
}

const std::string& Formula::name() const {
  if (kind() != Connective::Atom) throw std::logic_error("name() on a non-atom formula");
  return node_->name;
}

const Formula& Formula::child() const {
  if (kind() != Connective::Not) throw std::logic_error("child() on a non-negation formula");
  return node_->lhs;
}

const Formula& Formula::left() const {
  if (!is_binary()) throw std::logic_error("left() on a non-binary formula");
  return node_->lhs;
}

const Formula& Formula::right() const {
  if (!is_binary()) throw std::logic_error("right() on a non-binary formula");
  return node_->rhs;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Connective::True:
    case Connective::False: return true;
    case Connective::Atom: return a.node_->name == b.node_->name;
    case Connective::Not: return a.node_->lhs == b.node_->lhs;
    default: return a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
  }
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

MissingAtomError::MissingAtomError(const std::string& atom)
    : std::out_of_range("valuation has no value for atom '" + atom + "'"), atom_(atom) {}

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(f, os);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Formula& f) {
  print(f, os);
  return os;
}

bool evaluate(const Formula& f, const Valuation& v) {
  switch (f.kind()) {
    case Connective::True: return true;
    case Connective::False: return false;
    case Connective::Atom: {
      auto it = v.find(f.name());
      if (it == v.end()) throw MissingAtomError(f.name());
      return it->second;
    }
    case Connective::Not: return !evaluate(f.child(), v);
    default: break;
  }
  // Both sides are always evaluated so a partial valuation is reported even
  // when the result would be decided by one side.
  const bool l = evaluate(f.left(), v);
  const bool r = evaluate(f.right(), v);
  switch (f.kind()) {
    case Connective::And: return l && r;
    case Connective::Or: return l || r;
    case Connective::Implies: return !l || r;
    default: return l == r;
  }
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

}  // namespace epsdiag
