#include "epsdiag/prioritized.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace epsdiag {

EpsilonSchedule make_schedule(std::size_t fmax, int levels) {
  if (fmax == 0) throw std::invalid_argument("fmax must be positive");
  if (levels < 1) throw std::invalid_argument("a schedule needs at least one level");
  EpsilonSchedule s;
  s.fmax = fmax;
  s.exponents.assign(static_cast<std::size_t>(levels), 1);
  for (std::size_t i = s.exponents.size() - 1; i-- > 0;) {
    Degree next = 0;
    if (__builtin_mul_overflow(s.exponents[i + 1], static_cast<Degree>(fmax + 1), &next))
      throw std::overflow_error("epsilon schedule exponents overflow 64 bits");
    s.exponents[i] = next;
  }
  // Weights reach fmax * d_1 in the exponent.
  Degree top = 0;
  if (__builtin_mul_overflow(s.exponents.front(), static_cast<Degree>(fmax), &top))
    throw std::overflow_error("epsilon schedule exponents overflow 64 bits");
  return s;
}

EpsilonSchedule make_schedule(const KnowledgeBase& kb) {
  return make_schedule(std::max<std::size_t>(kb.size(), 1), kb.level_count());
}

std::vector<std::size_t> level_profile(const KnowledgeBase& kb, Environment e) {
  std::vector<std::size_t> profile(static_cast<std::size_t>(kb.level_count()), 0);
  for (auto a : e.members()) ++profile[static_cast<std::size_t>(kb.level_of(a) - 1)];
  return profile;
}

bool lex_preferred_over(const KnowledgeBase& kb, Environment a, Environment b) {
  const auto pa = level_profile(kb, a);
  const auto pb = level_profile(kb, b);
  return std::lexicographical_compare(pb.begin(), pb.end(), pa.begin(), pa.end());
}

namespace {

EpsilonPoly profile_weight(const EpsilonSchedule& sched, const std::vector<std::size_t>& present,
                           const std::vector<std::size_t>& sizes) {
  EpsilonPoly w(1);
  for (std::size_t i = 0; i < present.size(); ++i) {
    const Degree d = sched.exponents.at(i);
    const std::size_t absent = sizes[i] - present[i];
    w *= EpsilonPoly::monomial(1, d * absent) * survival_power(d, present[i]);
  }
  return w;
}

std::vector<std::size_t> level_sizes(const KnowledgeBase& kb) {
  return level_profile(kb, Environment::full(kb.size()));
}

}  // namespace

EpsilonPoly schedule_weight(const EpsilonSchedule& sched, const KnowledgeBase& kb, Environment e) {
  if (sched.exponents.size() != static_cast<std::size_t>(kb.level_count()))
    throw std::invalid_argument("schedule and knowledge base disagree on the number of levels");
  return profile_weight(sched, level_profile(kb, e), level_sizes(kb));
}

PrioritizedReasoner::PrioritizedReasoner(KnowledgeBase kb)
    : PrioritizedReasoner(std::make_shared<const EnvironmentLattice>(kb), make_schedule(kb)) {}

PrioritizedReasoner::PrioritizedReasoner(std::shared_ptr<const EnvironmentLattice> lattice,
                                         EpsilonSchedule sched)
    : lattice_(std::move(lattice)), schedule_(std::move(sched)) {
  if (!lattice_->facts_consistent()) throw FactsInconsistentError();
  if (schedule_.exponents.size() != static_cast<std::size_t>(kb().level_count()))
    throw std::invalid_argument("schedule and knowledge base disagree on the number of levels");

  std::vector<std::size_t> best;
  for (auto e : lattice_->consistent()) {
    auto profile = level_profile(kb(), e);
    if (preferred_.empty() || profile > best) {
      best = std::move(profile);
      preferred_.assign(1, e);
    } else if (profile == best) {
      preferred_.push_back(e);
    }
  }
  normalizer_ = total_weight(lattice_->consistent());
}

EpsilonPoly PrioritizedReasoner::total_weight(const std::vector<Environment>& envs) const {
  std::map<std::vector<std::size_t>, long> by_profile;
  for (auto e : envs) ++by_profile[level_profile(kb(), e)];
  const auto sizes = level_sizes(kb());
  EpsilonPoly sum;
  for (const auto& [profile, count] : by_profile)
    sum += EpsilonPoly(count) * profile_weight(schedule_, profile, sizes);
  return sum;
}

EpsilonRatio PrioritizedReasoner::posterior_env(Environment e) const {
  if (!lattice_->is_consistent(e)) return EpsilonRatio(EpsilonPoly(), normalizer_);
  return EpsilonRatio(schedule_weight(schedule_, kb(), e), normalizer_);
}

std::vector<Environment> PrioritizedReasoner::nonvanishing() const {
  std::vector<Environment> out;
  for (auto e : lattice_->consistent())
    if (limit_at_zero(posterior_env(e)) != 0) out.push_back(e);
  return out;
}

EpsilonRatio PrioritizedReasoner::belief(const Formula& psi) const {
  return EpsilonRatio(total_weight(lattice_->entailing(psi)), normalizer_);
}

Verdict PrioritizedReasoner::entails(const Formula& psi) const {
  const EpsilonRatio bel = belief(psi);
  const Rational limit = limit_at_zero(bel);

  ContextProver prover(kb(), psi);
  std::optional<Environment> counterexample;
  for (auto e : preferred_) {
    if (!prover.entails(e)) {
      counterexample = e;
      break;
    }
  }

  Verdict v;
  v.relation = Relation::R1;
  v.query = psi;
  v.belief_route = limit == 1;
  v.scenario_route = !counterexample.has_value();
  v.entailed = v.scenario_route;
  v.evidence = std::to_string(preferred_.size()) + " preferred sub-base(s); lim Bel(psi)=" +
               limit.get_str();
  if (counterexample) v.evidence += "; not proved by " + to_string(*counterexample);
  if (v.belief_route != v.scenario_route)
    throw RouteDisagreement("prioritized routes disagree for " + to_string(psi) + ": " +
                            v.evidence);
  return v;
}

std::vector<Environment> lex_preferred(const KnowledgeBase& kb) {
  return PrioritizedReasoner(kb).preferred();
}

Verdict prioritized_entails(const KnowledgeBase& kb, const Formula& psi) {
  return PrioritizedReasoner(kb).entails(psi);
}

}  // namespace epsdiag
