#include "epsdiag/belief.hpp"

namespace epsdiag {

BeliefEngine::BeliefEngine(KnowledgeBase kb)
    : BeliefEngine(std::make_shared<const EnvironmentLattice>(std::move(kb))) {}

BeliefEngine::BeliefEngine(std::shared_ptr<const EnvironmentLattice> lattice)
    : lattice_(std::move(lattice)) {
  const std::size_t n = lattice_->size();
  weights_.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) weights_.push_back(env_weight(n, k));
  prob_consistency_ = weigh(lattice_->count_consistent());
}

EpsilonPoly BeliefEngine::weigh(const CountVector& counts) const {
  EpsilonPoly sum;
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] != 0) sum += EpsilonPoly(static_cast<long>(counts[k])) * weights_.at(k);
  return sum;
}

void BeliefEngine::require_consistent_facts() const {
  if (prob_consistency_.is_zero()) throw FactsInconsistentError();
}

EpsilonRatio BeliefEngine::posterior_env(Environment e) const {
  require_consistent_facts();
  if (!lattice_->is_consistent(e)) return EpsilonRatio(EpsilonPoly(), prob_consistency_);
  return EpsilonRatio(weights_[e.size()], prob_consistency_);
}

EpsilonRatio BeliefEngine::posterior_fault(AssumptionId a) const {
  require_consistent_facts();
  return EpsilonRatio(weigh(lattice_->count_consistent_without(a)), prob_consistency_);
}

BeliefReport BeliefEngine::belief(const Formula& psi) const {
  require_consistent_facts();
  return report(psi, lattice_->count_entailing(psi));
}

BeliefReport BeliefEngine::report(const Formula& psi, const CountVector& entailing) const {
  require_consistent_facts();
  BeliefReport r;
  r.query = psi;
  r.bel = EpsilonRatio(weigh(entailing), prob_consistency_);
  r.limit = limit_at_zero(r.bel);
  r.order = order_at_zero(r.bel);
  r.k_psi = entailing.top();
  r.u_psi = r.k_psi ? entailing[*r.k_psi] : 0;
  r.lex = entailing;
  return r;
}

EpsilonPoly prob_consistency(const KnowledgeBase& kb) {
  return BeliefEngine(kb).prob_consistency();
}

EpsilonRatio posterior_env(const KnowledgeBase& kb, Environment e) {
  return BeliefEngine(kb).posterior_env(e);
}

EpsilonRatio posterior_fault(const KnowledgeBase& kb, AssumptionId a) {
  return BeliefEngine(kb).posterior_fault(a);
}

BeliefReport belief(const KnowledgeBase& kb, const Formula& psi) {
  return BeliefEngine(kb).belief(psi);
}

}  // namespace epsdiag
