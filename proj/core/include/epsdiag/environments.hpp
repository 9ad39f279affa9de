#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "epsdiag/knowledge_base.hpp"
#include "epsdiag/sat.hpp"

namespace epsdiag {

/// A set of assumptions as a bitmask (bit i = assumption i). Also used for
/// candidates, i.e. sets of assumptions declared faulty.
class Environment {
 public:
  constexpr Environment() = default;
  constexpr explicit Environment(std::uint64_t bits) : bits_(bits) {}
  /// 0-based ids.
  static Environment of(std::initializer_list<std::size_t> ids);
  static constexpr Environment full(std::size_t n) {
    return Environment(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(AssumptionId a) const { return ((bits_ >> a.index) & 1U) != 0; }
  constexpr bool subset_of(Environment o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr Environment complement(std::size_t n) const {
    return Environment(full(n).bits_ & ~bits_);
  }
  constexpr Environment with(AssumptionId a) const {
    return Environment(bits_ | (std::uint64_t{1} << a.index));
  }
  std::vector<AssumptionId> members() const;

  friend constexpr auto operator<=>(Environment, Environment) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// "{A1,A3,A4}" with 1-based assumption labels.
std::string to_string(Environment e);

/// c(k) for k = 0..n: environments of cardinality k satisfying some property.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::size_t n) : counts_(n + 1, 0) {}
  CountVector(std::initializer_list<std::uint64_t> values) : counts_(values) {}

  std::size_t size() const { return counts_.size(); }
  std::uint64_t operator[](std::size_t k) const { return counts_.at(k); }
  std::uint64_t& operator[](std::size_t k) { return counts_.at(k); }
  const std::vector<std::uint64_t>& values() const { return counts_; }

  /// Largest k with c(k) != 0; nullopt for the all-zero vector.
  std::optional<std::size_t> top() const;
  std::uint64_t total() const;
  bool is_zero() const { return !top().has_value(); }

  CountVector& operator+=(const CountVector& other);
  friend bool operator==(const CountVector&, const CountVector&) = default;

 private:
  std::vector<std::uint64_t> counts_;
};

std::string to_string(const CountVector& c);

enum class SweepStrategy {
  /// One independent satisfiability test per subset.
  Reference,
  /// Increasing-mask sweep: a set is tested only when all its immediate
  /// subsets are consistent and no subset's model already covers it.
  Pruned,
};

struct Classification {
  std::vector<Environment> consistent;
  std::vector<Environment> irredundant;
  std::size_t maxcard_size = 0;
  std::vector<Environment> maxcard;
  std::vector<Environment> mincard_candidates;
  std::vector<Environment> minimal_candidates;
};

/// F ∪ {φ_i | A_i ∈ E}; its deductive closure is Context(E).
std::vector<Formula> context_generators(const KnowledgeBase& kb, Environment e);

bool is_consistent_env(const KnowledgeBase& kb, Environment e);

/// Exhaustive enumeration of the environment lattice of one knowledge base.
///
/// The consistency table is computed once, on first use, and shared by all
/// later queries; concurrent readers are safe. Enumeration is limited to
/// kMaxDefaults defaults.
class EnvironmentLattice {
 public:
  static constexpr std::size_t kMaxDefaults = 22;

  explicit EnvironmentLattice(KnowledgeBase kb, SweepStrategy strategy = SweepStrategy::Pruned);

  const KnowledgeBase& kb() const { return kb_; }
  std::size_t size() const { return kb_.size(); }
  bool facts_consistent() const;

  bool is_consistent(Environment e) const;
  /// In increasing mask order.
  const std::vector<Environment>& consistent() const;
  CountVector count_consistent() const;
  /// Consistent environments that do not contain `a`.
  CountVector count_consistent_without(AssumptionId a) const;

  /// Consistent E with Context(E) ⊨ psi, obtained as the consistent
  /// environments of K that become inconsistent once ~psi is added to F.
  std::vector<Environment> entailing(const Formula& psi) const;
  CountVector count_entailing(const Formula& psi) const;

  /// Throws FactsInconsistentError when F is unsatisfiable.
  Classification classify() const;

 private:
  struct Table;
  const Table& table() const;

  KnowledgeBase kb_;
  SweepStrategy strategy_;
  mutable std::once_flag once_;
  mutable std::shared_ptr<const Table> table_;
};

Classification classify_environments(const KnowledgeBase& kb);
CountVector count_consistent(const KnowledgeBase& kb);
CountVector count_entailing(const KnowledgeBase& kb, const Formula& psi);

/// Decides Context(E) ⊨ psi one environment at a time, for a fixed psi.
/// Answers are memoized; not safe for concurrent use.
class ContextProver {
 public:
  ContextProver(const KnowledgeBase& kb, const Formula& psi);
  bool entails(Environment e);

 private:
  sat::GuardedTheory refuter_;  // F ∪ {~psi}, defaults guarded
  std::unordered_map<std::uint64_t, bool> memo_;
  std::vector<std::uint64_t> covers_;  // environments known not to entail psi
};

}  // namespace epsdiag
