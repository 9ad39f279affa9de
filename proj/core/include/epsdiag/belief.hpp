#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "epsdiag/environments.hpp"
#include "epsdiag/epsilon.hpp"
#include "epsdiag/formula.hpp"
#include "epsdiag/knowledge_base.hpp"

namespace epsdiag {

/// Belief of deducibility of one query, with its asymptotics.
struct BeliefReport {
  Formula query;
  /// Probability that psi is provable from the surviving defaults, given
  /// that the surviving environment is consistent.
  EpsilonRatio bel;
  Rational limit;
  /// nullopt: bel is identically zero.
  std::optional<std::int64_t> order;
  /// Largest cardinality of a consistent environment proving psi; nullopt
  /// stands for minus infinity (no such environment).
  std::optional<std::size_t> k_psi;
  /// Number of consistent environments of cardinality k_psi proving psi.
  std::uint64_t u_psi = 0;
  /// u(k, psi) for k = 0..n.
  CountVector lex;
};

/// Exact probabilities under independent faults of equal infinitesimal
/// probability e, conditioned on the true environment being consistent.
///
/// All ratios share prob_consistency() as their denominator, so comparing
/// two of them reduces to comparing numerators. Thread-safe after
/// construction.
class BeliefEngine {
 public:
  explicit BeliefEngine(KnowledgeBase kb);
  explicit BeliefEngine(std::shared_ptr<const EnvironmentLattice> lattice);

  const EnvironmentLattice& lattice() const { return *lattice_; }
  const KnowledgeBase& kb() const { return lattice_->kb(); }

  /// Pr(consistent) = sum over consistent E of e^(n-|E|)(1-e)^|E|. Zero when
  /// the facts are inconsistent.
  const EpsilonPoly& prob_consistency() const { return prob_consistency_; }

  /// sum_k c(k) e^(n-k)(1-e)^k
  EpsilonPoly weigh(const CountVector& counts) const;

  /// Pr(E | consistent); exactly zero for an inconsistent E.
  EpsilonRatio posterior_env(Environment e) const;
  /// Pr(~A_i | consistent).
  EpsilonRatio posterior_fault(AssumptionId a) const;
  BeliefReport belief(const Formula& psi) const;

  /// The report for psi built from an already computed count vector.
  BeliefReport report(const Formula& psi, const CountVector& entailing) const;

 private:
  void require_consistent_facts() const;

  std::shared_ptr<const EnvironmentLattice> lattice_;
  std::vector<EpsilonPoly> weights_;  // env_weight(n, k) by k
  EpsilonPoly prob_consistency_;
};

EpsilonPoly prob_consistency(const KnowledgeBase& kb);
EpsilonRatio posterior_env(const KnowledgeBase& kb, Environment e);
EpsilonRatio posterior_fault(const KnowledgeBase& kb, AssumptionId a);
BeliefReport belief(const KnowledgeBase& kb, const Formula& psi);

}  // namespace epsdiag
