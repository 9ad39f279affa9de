#pragma once

// Brute-force reference for the tests. Everything here is computed from
// formula evaluation over all valuations; nothing calls the SAT engine, the
// lattice sweep or the polynomial code.

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epsdiag/formula.hpp"
#include "epsdiag/knowledge_base.hpp"

namespace oracle {

using epsdiag::Formula;
using epsdiag::KnowledgeBase;

inline std::vector<std::string> atoms_of(const KnowledgeBase& kb,
                                         const std::vector<Formula>& extra = {}) {
  std::set<std::string> all;
  auto add = [&](const Formula& f) {
    auto a = epsdiag::atoms(f);
    all.insert(a.begin(), a.end());
  };
  for (const auto& f : kb.facts()) add(f);
  for (const auto& f : kb.defaults()) add(f);
  for (const auto& f : extra) add(f);
  return {all.begin(), all.end()};
}

/// Every valuation over the atoms of the KB (and of the extra formulas) that
/// satisfies the facts, with the set of defaults it satisfies.
class Brute {
 public:
  explicit Brute(const KnowledgeBase& kb, const std::vector<Formula>& extra = {})
      : kb_(kb), n_(kb.size()), atoms_(atoms_of(kb, extra)) {
    const std::size_t v = atoms_.size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << v); ++bits) {
      epsdiag::Valuation val;
      for (std::size_t i = 0; i < v; ++i) val[atoms_[i]] = ((bits >> i) & 1U) != 0;
      bool facts = true;
      for (const auto& f : kb.facts()) facts = facts && epsdiag::evaluate(f, val);
      if (!facts) continue;
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < n_; ++i)
        if (epsdiag::evaluate(kb.defaults()[i], val)) mask |= std::uint64_t{1} << i;
      models_.push_back(val);
      sat_.push_back(mask);
    }
    for (std::uint64_t e = 0; e < (std::uint64_t{1} << n_); ++e)
      if (consistent(e)) consistent_.push_back(e);
  }

  std::size_t n() const { return n_; }
  bool facts_consistent() const { return !models_.empty(); }

  bool consistent(std::uint64_t e) const {
    for (auto m : sat_)
      if ((e & ~m) == 0) return true;
    return false;
  }
  const std::vector<std::uint64_t>& consistent_envs() const { return consistent_; }

  /// psi holds in every model of F ∪ E. Atoms of psi must be covered.
  bool entails(std::uint64_t e, const Formula& psi) const {
    for (std::size_t i = 0; i < models_.size(); ++i)
      if ((e & ~sat_[i]) == 0 && !epsdiag::evaluate(psi, models_[i])) return false;
    return true;
  }

  bool facts_entail(const Formula& psi) const {
    for (const auto& m : models_)
      if (!epsdiag::evaluate(psi, m)) return false;
    return true;
  }

  std::vector<std::uint64_t> counts() const {
    std::vector<std::uint64_t> c(n_ + 1, 0);
    for (auto e : consistent_) ++c[static_cast<std::size_t>(std::popcount(e))];
    return c;
  }

  std::vector<std::uint64_t> entailing_counts(const Formula& psi) const {
    std::vector<std::uint64_t> c(n_ + 1, 0);
    for (auto e : consistent_)
      if (entails(e, psi)) ++c[static_cast<std::size_t>(std::popcount(e))];
    return c;
  }

  std::size_t kstar() const {
    std::size_t k = 0;
    for (auto e : consistent_) k = std::max<std::size_t>(k, std::popcount(e));
    return k;
  }

  std::vector<std::uint64_t> maxcard() const {
    std::vector<std::uint64_t> out;
    for (auto e : consistent_)
      if (static_cast<std::size_t>(std::popcount(e)) == kstar()) out.push_back(e);
    return out;
  }

  std::vector<std::uint64_t> irredundant() const {
    std::vector<std::uint64_t> out;
    for (auto e : consistent_) {
      bool maximal = true;
      for (std::size_t i = 0; i < n_ && maximal; ++i)
        if (((e >> i) & 1U) == 0 && consistent(e | (std::uint64_t{1} << i))) maximal = false;
      if (maximal) out.push_back(e);
    }
    return out;
  }

  /// Consistent environments with the largest per-level retention profile,
  /// level 1 compared first.
  std::vector<std::uint64_t> lex_preferred() const {
    auto profile = [&](std::uint64_t e) {
      std::vector<std::size_t> p(static_cast<std::size_t>(kb_.level_count()), 0);
      for (std::size_t i = 0; i < n_; ++i)
        if ((e >> i) & 1U) ++p[static_cast<std::size_t>(kb_.levels()[i] - 1)];
      return p;
    };
    std::vector<std::size_t> best;
    for (auto e : consistent_) best = std::max(best, profile(e));
    std::vector<std::uint64_t> out;
    for (auto e : consistent_)
      if (profile(e) == best) out.push_back(e);
    return out;
  }

 private:
  KnowledgeBase kb_;
  std::size_t n_;
  std::vector<std::string> atoms_;
  std::vector<epsdiag::Valuation> models_;
  std::vector<std::uint64_t> sat_;
  std::vector<std::uint64_t> consistent_;
};

inline std::optional<std::size_t> top(const std::vector<std::uint64_t>& c) {
  for (std::size_t k = c.size(); k-- > 0;)
    if (c[k] != 0) return k;
  return std::nullopt;
}

/// Scenario-side verdict of relation r (1..9) for psi, straight from the
/// characterizations over maxcard and consistent environments.
inline bool relation(const Brute& b, const Formula& psi, int r) {
  const Formula neg = Formula::negation(psi);
  const auto maxcard = b.maxcard();
  std::size_t pos_max = 0;
  std::size_t neg_max = 0;
  for (auto e : maxcard) {
    pos_max += b.entails(e, psi) ? 1 : 0;
    neg_max += b.entails(e, neg) ? 1 : 0;
  }
  bool pos_any = false;
  bool neg_any = false;
  for (auto e : b.consistent_envs()) {
    pos_any = pos_any || b.entails(e, psi);
    neg_any = neg_any || b.entails(e, neg);
  }
  switch (r) {
    case 1: return pos_max == maxcard.size();
    case 2: return pos_max > 0;
    case 3: return pos_max > 0 && neg_max == 0;
    case 4: return pos_any;
    case 5: return pos_any && !neg_any;
    case 6: return 2 * pos_max > maxcard.size();
    case 7: {
      const auto lp = b.entailing_counts(psi);
      const auto ln = b.entailing_counts(neg);
      for (std::size_t k = lp.size(); k-- > 0;)
        if (lp[k] != ln[k]) return lp[k] > ln[k];
      return false;
    }
    case 8: {
      const auto kp = top(b.entailing_counts(psi));
      const auto kn = top(b.entailing_counts(neg));
      return kp && (!kn || *kp > *kn);
    }
    case 9: return b.facts_entail(psi);
    default: return false;
  }
}

/// Exactly half of the maxcard environments prove psi.
inline bool r6_tie(const Brute& b, const Formula& psi) {
  const auto maxcard = b.maxcard();
  std::size_t pos = 0;
  for (auto e : maxcard) pos += b.entails(e, psi) ? 1 : 0;
  return 2 * pos == maxcard.size();
}

/// Leading behaviour c e^order of an asymptotic closed form.
struct Asymptotic {
  mpq_class coefficient;
  std::optional<std::int64_t> order;  // nullopt: identically zero
};

/// Pr(E | consistent) for a consistent E: (1/p) e^(k* - |E|).
inline Asymptotic posterior_env(const Brute& b, std::uint64_t e) {
  if (!b.consistent(e)) return {0, std::nullopt};
  const mpq_class p(static_cast<unsigned long>(b.maxcard().size()));
  return {1 / p, static_cast<std::int64_t>(b.kstar()) - std::popcount(e)};
}

/// Pr(~A_i | consistent): r/p when some maxcard environment omits A_i;
/// otherwise (1 + r'/p) e with r' the size k*-1 consistent environments
/// without A_i that are not a maxcard environment minus A_i.
inline Asymptotic posterior_fault(const Brute& b, std::size_t i) {
  const auto maxcard = b.maxcard();
  const mpq_class p(static_cast<unsigned long>(maxcard.size()));
  const std::uint64_t bit = std::uint64_t{1} << i;
  std::size_t r = 0;
  for (auto e : maxcard) r += (e & bit) == 0 ? 1 : 0;
  if (r > 0) {
    mpq_class c = mpq_class(static_cast<unsigned long>(r)) / p;
    c.canonicalize();
    return {c, 0};
  }
  if (b.kstar() == 0) return {0, std::nullopt};
  std::set<std::uint64_t> shadows;
  for (auto e : maxcard) shadows.insert(e & ~bit);
  std::size_t rprime = 0;
  for (auto e : b.consistent_envs())
    if ((e & bit) == 0 && static_cast<std::size_t>(std::popcount(e)) + 1 == b.kstar() &&
        !shadows.contains(e))
      ++rprime;
  mpq_class c = 1 + mpq_class(static_cast<unsigned long>(rprime)) / p;
  c.canonicalize();
  return {c, 1};
}

/// Bel(psi): (u_psi / p) e^(k* - k_psi).
inline Asymptotic belief(const Brute& b, const Formula& psi) {
  const auto c = b.entailing_counts(psi);
  const auto k = top(c);
  if (!k) return {0, std::nullopt};
  const mpq_class p(static_cast<unsigned long>(b.maxcard().size()));
  mpq_class coeff = mpq_class(static_cast<unsigned long>(c[*k])) / p;
  coeff.canonicalize();
  return {coeff, static_cast<std::int64_t>(b.kstar()) - static_cast<std::int64_t>(*k)};
}

}  // namespace oracle
