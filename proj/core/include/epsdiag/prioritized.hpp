#pragma once

#include <memory>
#include <vector>

#include "epsdiag/environments.hpp"
#include "epsdiag/epsilon.hpp"
#include "epsdiag/knowledge_base.hpp"
#include "epsdiag/relations.hpp"

namespace epsdiag {

/// Per-level fault probabilities e_i = e^{d_i} for a prioritized base.
///
/// Level 1 is the most important, so its sources are the least likely to
/// fail: d_m = 1 and d_i = d_{i+1} (fmax + 1), hence e_i < e_{i+1}^{fmax}.
/// Dropping one level-i default is less likely than dropping up to fmax
/// defaults of any lower level.
struct EpsilonSchedule {
  std::size_t fmax = 1;
  /// exponents[i] is d for level i + 1.
  std::vector<Degree> exponents;

  Degree exponent_of(int level) const { return exponents.at(static_cast<std::size_t>(level - 1)); }
};

/// Throws std::overflow_error if the exponents do not fit in 64 bits.
EpsilonSchedule make_schedule(std::size_t fmax, int levels);
/// fmax = number of defaults (at least 1).
EpsilonSchedule make_schedule(const KnowledgeBase& kb);

/// Number of members of `e` on each level, level 1 first.
std::vector<std::size_t> level_profile(const KnowledgeBase& kb, Environment e);

/// a is lexicographically strictly preferred to b: at the first level
/// (from level 1) where the retained counts differ, a keeps more.
bool lex_preferred_over(const KnowledgeBase& kb, Environment a, Environment b);

/// prod_i e^{d_i * absent_i} (1 - e^{d_i})^{present_i}
EpsilonPoly schedule_weight(const EpsilonSchedule& sched, const KnowledgeBase& kb, Environment e);

/// Lexicographic reasoning over one prioritized base. Thread-safe after
/// construction; throws FactsInconsistentError from the constructor.
class PrioritizedReasoner {
 public:
  explicit PrioritizedReasoner(KnowledgeBase kb);
  PrioritizedReasoner(std::shared_ptr<const EnvironmentLattice> lattice, EpsilonSchedule sched);

  const KnowledgeBase& kb() const { return lattice_->kb(); }
  const EpsilonSchedule& schedule() const { return schedule_; }

  /// Consistent environments no other consistent environment is preferred
  /// to, in increasing mask order.
  const std::vector<Environment>& preferred() const { return preferred_; }

  /// Sum of schedule weights over consistent environments.
  const EpsilonPoly& prob_consistency() const { return normalizer_; }
  EpsilonRatio posterior_env(Environment e) const;
  /// Consistent environments whose posterior has a nonzero limit.
  std::vector<Environment> nonvanishing() const;

  /// Schedule-weighted Bel(psi).
  EpsilonRatio belief(const Formula& psi) const;

  /// Scenario route: every preferred environment proves psi. Belief route:
  /// schedule-weighted Bel(psi) tends to 1. The verdict carries R1, of which
  /// this is the prioritized generalization.
  Verdict entails(const Formula& psi) const;

 private:
  EpsilonPoly total_weight(const std::vector<Environment>& envs) const;

  std::shared_ptr<const EnvironmentLattice> lattice_;
  EpsilonSchedule schedule_;
  std::vector<Environment> preferred_;
  EpsilonPoly normalizer_;
};

std::vector<Environment> lex_preferred(const KnowledgeBase& kb);
Verdict prioritized_entails(const KnowledgeBase& kb, const Formula& psi);

}  // namespace epsdiag
