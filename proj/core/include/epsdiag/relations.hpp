#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epsdiag/belief.hpp"
#include "epsdiag/environments.hpp"
#include "epsdiag/knowledge_base.hpp"

namespace epsdiag {

/// The nine consequence relations induced by the belief of deducibility.
///
///   R1  lim Bel(psi) = 1                       strong (all maxcard scenarios)
///   R2  lim Bel(psi) > 0                       weak (some maxcard scenario)
///   R3  lim Bel(psi) > 0, lim Bel(~psi) = 0    argumentative
///   R4  Bel(psi) > 0                           some scenario
///   R5  Bel(psi) > 0, Bel(~psi) = 0            argumentative over all scenarios
///   R6  Bel(psi) > 1/2                         majority of maxcard scenarios
///   R7  Bel(psi) > Bel(~psi)                   lexicographic on u(k, .)
///   R8  Bel(~psi)/Bel(psi) -> 0                k_psi > k_~psi
///   R9  Bel(psi) = 1                           F |= psi
///
/// Strict inequalities hold "for all sufficiently small e > 0".
enum class Relation { R1 = 1, R2, R3, R4, R5, R6, R7, R8, R9 };

inline constexpr std::array<Relation, 9> kAllRelations = {
    Relation::R1, Relation::R2, Relation::R3, Relation::R4, Relation::R5,
    Relation::R6, Relation::R7, Relation::R8, Relation::R9};

/// "r1".."r9"
std::string_view name(Relation r);
/// Accepts "r3" or "R3".
std::optional<Relation> parse_relation(std::string_view text);

struct Verdict {
  Relation relation = Relation::R1;
  Formula query;
  bool entailed = false;
  bool belief_route = false;
  bool scenario_route = false;
  /// R6 with exactly half of the maxcard scenarios entailing the query and
  /// an exact belief above 1/2: the scenario route decides.
  bool tie_flagged = false;
  std::string evidence;
};

/// "x" when entailed, "-" otherwise.
std::string_view mark(const Verdict& v);

/// Raised when the two routes disagree outside the documented R6 tie.
class RouteDisagreement : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Everything both routes need to decide all nine relations for one query.
struct QueryAnalysis {
  Formula query;
  BeliefReport belief;      // psi
  BeliefReport disbelief;   // ~psi
  std::size_t maxcard = 0;  // p
  std::size_t maxcard_entailing = 0;
  std::size_t maxcard_refuting = 0;
  std::optional<Environment> witness;            // irredundant, entails psi
  std::optional<Environment> counter_witness;    // irredundant, entails ~psi
  std::optional<std::size_t> scenario_k;         // k_psi from the scenarios
  std::optional<std::size_t> scenario_k_neg;
  /// Largest k with u(k, psi) != u(k, ~psi), and both counts there.
  std::optional<std::size_t> diff_level;
  std::uint64_t diff_pos = 0;
  std::uint64_t diff_neg = 0;
  bool facts_entail = false;
};

/// Decides the relations for one knowledge base. Thread-safe after
/// construction.
class Reasoner {
 public:
  explicit Reasoner(KnowledgeBase kb);
  explicit Reasoner(std::shared_ptr<const BeliefEngine> engine);

  const BeliefEngine& engine() const { return *engine_; }
  const KnowledgeBase& kb() const { return engine_->kb(); }
  /// Throws FactsInconsistentError.
  const Classification& classification() const;

  /// Throws FactsInconsistentError.
  QueryAnalysis analyze(const Formula& psi) const;
  Verdict decide(const QueryAnalysis& q, Relation r) const;
  /// R9 is decidable with inconsistent facts; every other relation throws
  /// FactsInconsistentError.
  Verdict decide(const Formula& psi, Relation r) const;
  std::vector<Verdict> decide(const Formula& psi, std::span<const Relation> rels) const;

 private:
  std::shared_ptr<const BeliefEngine> engine_;
  std::optional<Classification> classification_;
  /// Consistent environments grouped by cardinality.
  std::vector<std::vector<Environment>> by_size_;
};

Verdict decide(const KnowledgeBase& kb, const Formula& psi, Relation r);

/// Row-major: one row per query, one column per relation.
std::vector<std::vector<Verdict>> entailment_table(const KnowledgeBase& kb,
                                                   std::span<const Formula> queries,
                                                   std::span<const Relation> rels);

/// Every atom of the knowledge base followed by its negation, atoms sorted.
std::vector<Formula> literal_queries(const KnowledgeBase& kb);

struct Edge {
  Relation from;
  Relation to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Implications between the relations that follow from their scenario
/// characterizations: R9→R1, R1→R3, R1→R6, R3→R2, R3→R8, R6→R2, R6→R7,
/// R5→R8, R8→R7, R7→R4, R2→R4. Derived, not transcribed from a figure.
std::vector<Edge> derived_precedence_edges();

/// Whether `from` reaches `to` through `edges` (reflexive).
bool implied_by_edges(std::span<const Edge> edges, Relation from, Relation to);

struct PrecedenceViolation {
  std::size_t kb_index = 0;
  Formula query;
  Edge edge;
};

struct PrecedenceReport {
  std::size_t kbs_checked = 0;
  std::size_t kbs_skipped = 0;  // inconsistent facts
  std::size_t queries_checked = 0;
  std::vector<PrecedenceViolation> violations;
};

/// For every KB, every literal query and every edge (i, j): Ri ⇒ Rj.
PrecedenceReport precedence_check(std::span<const KnowledgeBase> sample,
                                  std::span<const Edge> edges);

struct SafetyFinding {
  Relation relation;
  /// psi with both psi and ~psi entailed, if one was found.
  std::optional<Formula> witness;
};

/// Searches the literal queries plus `extra` for a query entailed together
/// with its negation.
std::vector<SafetyFinding> safety_probe(const KnowledgeBase& kb, std::span<const Relation> rels,
                                        std::span<const Formula> extra = {});

}  // namespace epsdiag
