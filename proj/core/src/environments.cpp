#include "epsdiag/environments.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace epsdiag {

Environment Environment::of(std::initializer_list<std::size_t> ids) {
  std::uint64_t bits = 0;
  for (auto i : ids) {
    if (i >= 64) throw std::out_of_range("assumption id out of range");
    bits |= std::uint64_t{1} << i;
  }
  return Environment(bits);
}

std::vector<AssumptionId> Environment::members() const {
  std::vector<AssumptionId> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1)
    out.push_back({static_cast<std::size_t>(std::countr_zero(b))});
  return out;
}

std::string to_string(Environment e) {
  std::string out = "{";
  bool first = true;
  for (auto a : e.members()) {
    if (!first) out += ',';
    out += 'A' + std::to_string(a.index + 1);
    first = false;
  }
  return out + '}';
}

std::optional<std::size_t> CountVector::top() const {
  for (std::size_t k = counts_.size(); k-- > 0;)
    if (counts_[k] != 0) return k;
  return std::nullopt;
}

std::uint64_t CountVector::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

CountVector& CountVector::operator+=(const CountVector& other) {
  if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0);
  for (std::size_t k = 0; k < other.counts_.size(); ++k) counts_[k] += other.counts_[k];
  return *this;
}

std::string to_string(const CountVector& c) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? ", " : "") << c[k];
  os << ']';
  return os.str();
}

std::vector<Formula> context_generators(const KnowledgeBase& kb, Environment e) {
  std::vector<Formula> out = kb.facts();
  for (auto a : e.members()) out.push_back(kb.default_of(a));
  return out;
}

bool is_consistent_env(const KnowledgeBase& kb, Environment e) {
  if (!e.subset_of(Environment::full(kb.size())))
    throw std::out_of_range("environment " + to_string(e) + " names unknown assumptions");
  return sat::is_satisfiable(context_generators(kb, e));
}

namespace {

using Flags = std::vector<std::uint8_t>;

sat::GuardedTheory compile(const KnowledgeBase& kb, const Formula* extra_fact) {
  sat::GuardedTheory theory;
  for (const auto& f : kb.facts()) theory.add_hard(f);
  if (extra_fact) theory.add_hard(*extra_fact);
  for (const auto& d : kb.defaults()) theory.add_guarded(d);
  return theory;
}

// Consistency flag for every mask of an n-element assumption set. Masks
// with allowed[mask] == 0 are skipped and reported inconsistent; `allowed`
// must itself be downward closed.
Flags pruned_sweep(sat::GuardedTheory& theory, std::size_t n, const Flags* allowed) {
  const std::size_t total = std::size_t{1} << n;
  Flags flags(total, 0);
  std::vector<std::uint64_t> cover(total, 0);
  for (std::size_t mask = 0; mask < total; ++mask) {
    if (allowed && (*allowed)[mask] == 0) continue;
    bool subsets_ok = true;
    std::optional<std::uint64_t> reused;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      const std::size_t sub = mask & ~(rest & (~rest + 1));
      if (flags[sub] == 0) {
        subsets_ok = false;
        break;
      }
      if (!reused && (cover[sub] & mask) == mask) reused = cover[sub];
    }
    if (!subsets_ok) continue;
    if (!reused) reused = theory.solve(mask);
    if (reused) {
      flags[mask] = 1;
      cover[mask] = *reused;
    }
  }
  return flags;
}

Flags reference_sweep(const KnowledgeBase& kb, const Flags* allowed) {
  const std::size_t total = std::size_t{1} << kb.size();
  Flags flags(total, 0);
  for (std::size_t mask = 0; mask < total; ++mask) {
    if (allowed && (*allowed)[mask] == 0) continue;
    flags[mask] = is_consistent_env(kb, Environment(mask)) ? 1 : 0;
  }
  return flags;
}

Flags sweep(const KnowledgeBase& kb, SweepStrategy strategy, const Flags* allowed) {
  if (strategy == SweepStrategy::Reference) return reference_sweep(kb, allowed);
  auto theory = compile(kb, nullptr);
  return pruned_sweep(theory, kb.size(), allowed);
}

}  // namespace

struct EnvironmentLattice::Table {
  Flags flags;
  std::vector<Environment> consistent;
};

EnvironmentLattice::EnvironmentLattice(KnowledgeBase kb, SweepStrategy strategy)
    : kb_(std::move(kb)), strategy_(strategy) {
  if (kb_.size() > kMaxDefaults)
    throw std::length_error("environment enumeration supports at most " +
                            std::to_string(kMaxDefaults) + " defaults, got " +
                            std::to_string(kb_.size()));
}

const EnvironmentLattice::Table& EnvironmentLattice::table() const {
  std::call_once(once_, [this] {
    auto t = std::make_shared<Table>();
    t->flags = sweep(kb_, strategy_, nullptr);
    for (std::size_t mask = 0; mask < t->flags.size(); ++mask)
      if (t->flags[mask] != 0) t->consistent.emplace_back(mask);
    table_ = std::move(t);
  });
  return *table_;
}

bool EnvironmentLattice::facts_consistent() const { return table().flags[0] != 0; }

bool EnvironmentLattice::is_consistent(Environment e) const {
  if (!e.subset_of(Environment::full(size())))
    throw std::out_of_range("environment " + to_string(e) + " names unknown assumptions");
  return table().flags[e.bits()] != 0;
}

const std::vector<Environment>& EnvironmentLattice::consistent() const {
  return table().consistent;
}

CountVector EnvironmentLattice::count_consistent() const {
  CountVector c(size());
  for (auto e : consistent()) ++c[e.size()];
  return c;
}

CountVector EnvironmentLattice::count_consistent_without(AssumptionId a) const {
  if (a.index >= size()) throw std::out_of_range("assumption id out of range");
  CountVector c(size());
  for (auto e : consistent())
    if (!e.contains(a)) ++c[e.size()];
  return c;
}

std::vector<Environment> EnvironmentLattice::entailing(const Formula& psi) const {
  const auto& base = table();
  const Formula refutation = Formula::negation(psi);
  Flags refuted;
  if (strategy_ == SweepStrategy::Reference) {
    refuted = reference_sweep(kb_.add_evidence(refutation), &base.flags);
  } else {
    auto theory = compile(kb_, &refutation);
    refuted = pruned_sweep(theory, size(), &base.flags);
  }
  std::vector<Environment> out;
  for (auto e : base.consistent)
    if (refuted[e.bits()] == 0) out.push_back(e);
  return out;
}

CountVector EnvironmentLattice::count_entailing(const Formula& psi) const {
  CountVector c(size());
  for (auto e : entailing(psi)) ++c[e.size()];
  return c;
}

Classification EnvironmentLattice::classify() const {
  if (!facts_consistent()) throw FactsInconsistentError();
  const std::size_t n = size();
  Classification out;
  out.consistent = consistent();
  for (auto e : out.consistent) {
    bool extendable = false;
    for (std::size_t i = 0; i < n && !extendable; ++i) {
      const AssumptionId a{i};
      if (!e.contains(a) && is_consistent(e.with(a))) extendable = true;
    }
    if (!extendable) out.irredundant.push_back(e);
    out.maxcard_size = std::max(out.maxcard_size, e.size());
  }
  for (auto e : out.irredundant) {
    if (e.size() == out.maxcard_size) {
      out.maxcard.push_back(e);
      out.mincard_candidates.push_back(e.complement(n));
    }
    out.minimal_candidates.push_back(e.complement(n));
  }
  std::sort(out.mincard_candidates.begin(), out.mincard_candidates.end());
  std::sort(out.minimal_candidates.begin(), out.minimal_candidates.end());
  return out;
}

Classification classify_environments(const KnowledgeBase& kb) {
  return EnvironmentLattice(kb).classify();
}

CountVector count_consistent(const KnowledgeBase& kb) {
  return EnvironmentLattice(kb).count_consistent();
}

CountVector count_entailing(const KnowledgeBase& kb, const Formula& psi) {
  return EnvironmentLattice(kb).count_entailing(psi);
}

ContextProver::ContextProver(const KnowledgeBase& kb, const Formula& psi) {
  for (const auto& f : kb.facts()) refuter_.add_hard(f);
  refuter_.add_hard(Formula::negation(psi));
  for (const auto& d : kb.defaults()) refuter_.add_guarded(d);
}

bool ContextProver::entails(Environment e) {
  if (auto it = memo_.find(e.bits()); it != memo_.end()) return it->second;
  bool result = true;
  for (auto cover : covers_) {
    if ((cover & e.bits()) == e.bits()) {
      result = false;
      break;
    }
  }
  if (result) {
    if (auto cover = refuter_.solve(e.bits())) {
      result = false;
      covers_.push_back(*cover);
      if (covers_.size() > 16) covers_.erase(covers_.begin());
    }
  }
  memo_.emplace(e.bits(), result);
  return result;
}

}  // namespace epsdiag
