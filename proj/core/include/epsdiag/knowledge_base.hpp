#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epsdiag/formula.hpp"

namespace epsdiag {

/// Index of a default in declaration order; assumption i vouches for the
/// i-th default.
struct AssumptionId {
  std::size_t index = 0;

  friend auto operator<=>(const AssumptionId&, const AssumptionId&) = default;
};

/// Hard facts plus an ordered multiset of defaults, each default labeled by
/// its own assumption. Every default carries a priority level (1 is the most
/// important); a file without `defaults[k]:` headers puts everything on
/// level 1.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  /// All defaults on level 1, no explicit levels.
  KnowledgeBase(std::vector<Formula> facts, std::vector<Formula> defaults);
  /// One level per default, each >= 1. `level_count` defaults to the
  /// largest level used; a larger value declares trailing empty levels.
  KnowledgeBase(std::vector<Formula> facts, std::vector<Formula> defaults,
                std::vector<int> levels, int level_count = 0);

  const std::vector<Formula>& facts() const { return facts_; }
  const std::vector<Formula>& defaults() const { return defaults_; }
  const Formula& default_of(AssumptionId a) const { return defaults_.at(a.index); }
  std::size_t size() const { return defaults_.size(); }

  bool has_explicit_levels() const { return explicit_levels_; }
  int level_of(AssumptionId a) const { return levels_.at(a.index); }
  const std::vector<int>& levels() const { return levels_; }
  /// Number of levels m; 1 for an unprioritized base (even with no defaults).
  int level_count() const { return level_count_; }

  /// (F ∪ {phi}, Δ): same defaults, ids and levels.
  KnowledgeBase add_evidence(const Formula& phi) const;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;

 private:
  std::vector<Formula> facts_;
  std::vector<Formula> defaults_;
  std::vector<int> levels_;
  int level_count_ = 1;
  bool explicit_levels_ = false;
};

/// Raised by every operation that needs a consistent F (enumeration of
/// consistent environments, conditioning on consistency, relations).
class FactsInconsistentError : public std::domain_error {
 public:
  FactsInconsistentError() : std::domain_error("the hard facts are inconsistent") {}
};

/// Structural problems in a KB file: unknown section, content before a
/// header, duplicate level header, level gap, or a malformed formula.
class KbSyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Reads the line-oriented format:
///
///     # comment
///     facts:
///     a
///     defaults:          (same as defaults[1]:)
///     a -> b & e & f
///     defaults[2]:
///     ~b | ~d
///
/// Semantic problems (inconsistent facts) never make loading fail.
KnowledgeBase load_kb(std::string_view text);

/// Inverse of load_kb. Each level's defaults must be contiguous in
/// declaration order, which load_kb always guarantees.
std::string to_text(const KnowledgeBase& kb);

KnowledgeBase add_evidence(const KnowledgeBase& kb, const Formula& phi);

struct ValidationReport {
  bool facts_satisfiable = false;
  bool all_satisfiable = false;  // F ∪ Δ
  std::size_t defaults = 0;
  int levels = 1;
  bool explicit_levels = false;
  std::vector<std::size_t> level_sizes;
};

ValidationReport validate(const KnowledgeBase& kb);

}  // namespace epsdiag
