#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace epsdiag {

enum class Connective {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
};

/// Immutable propositional formula. Copies share structure.
///
/// Equality is structural: two syntactic copies of the same formula compare
/// equal, but logically equivalent formulas with different trees do not.
class Formula {
 public:
  /// Defaults to the constant `true`.
  Formula();

  static Formula top();
  static Formula bottom();
  static Formula atom(std::string name);
  static Formula negation(Formula child);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  static Formula implication(Formula left, Formula right);
  static Formula equivalence(Formula left, Formula right);

  Connective kind() const;
  bool is_binary() const;

  /// Only valid for atoms.
  const std::string& name() const;
  /// Only valid for negations.
  const Formula& child() const;
  /// Only valid for binary connectives.
  const Formula& left() const;
  const Formula& right() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

using Valuation = std::map<std::string, bool, std::less<>>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// The text after the "line L, column C: " prefix.
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class MissingAtomError : public std::out_of_range {
 public:
  explicit MissingAtomError(const std::string& atom);
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

/// Parses the ASCII syntax `~ & | -> <->` with `true`, `false` and
/// identifiers. Precedence, tightest first: ~ & | -> <->. Binary chains
/// associate to the right. Columns in errors are 1-based.
Formula parse_formula(std::string_view text);

/// Prints with the minimum parentheses needed for parse_formula to rebuild
/// the same tree.
std::string to_string(const Formula& f);
std::ostream& operator<<(std::ostream& os, const Formula& f);

/// Throws MissingAtomError when `v` does not cover an atom of `f`.
bool evaluate(const Formula& f, const Valuation& v);

std::set<std::string> atoms(const Formula& f);

}  // namespace epsdiag
