#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "epsdiag/formula.hpp"

namespace epsdiag::sat {

/// A satisfiability procedure over finite formula sets. Models are total on
/// the atoms occurring in the input and on nothing else.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::optional<Valuation> find_model(std::span<const Formula> fs) const = 0;
  virtual std::string_view name() const = 0;
};

/// Exhaustive enumeration of valuations in increasing binary order over the
/// lexicographically sorted atoms. Reference oracle; refuses more than
/// kMaxAtoms atoms.
class TruthTableBackend final : public Backend {
 public:
  static constexpr std::size_t kMaxAtoms = 24;
  std::optional<Valuation> find_model(std::span<const Formula> fs) const override;
  std::string_view name() const override { return "truth-table"; }
};

/// Tseitin encoding plus backtracking search with unit propagation,
/// branching on atoms in lexicographic order, false first.
class DpllBackend final : public Backend {
 public:
  std::optional<Valuation> find_model(std::span<const Formula> fs) const override;
  std::string_view name() const override { return "dpll"; }
};

const Backend& default_backend();

bool is_satisfiable(std::span<const Formula> fs, const Backend& backend = default_backend());

/// fs ⊨ q, decided as unsatisfiability of fs ∪ {~q}.
bool entails(std::span<const Formula> fs, const Formula& q,
             const Backend& backend = default_backend());

/// Hard formulas plus up to 64 guarded formulas, each switched on by its own
/// selector literal, compiled once and solved repeatedly under different
/// selections. Not safe for concurrent use: the search state is reused.
class GuardedTheory {
 public:
  static constexpr std::size_t kMaxGuards = 64;

  GuardedTheory();
  GuardedTheory(const GuardedTheory&);
  GuardedTheory& operator=(const GuardedTheory&);
  GuardedTheory(GuardedTheory&&) noexcept;
  GuardedTheory& operator=(GuardedTheory&&) noexcept;
  ~GuardedTheory();

  void add_hard(const Formula& f);
  /// Returns the guard index, dense from 0.
  std::size_t add_guarded(const Formula& f);
  std::size_t guard_count() const;

  /// Solves with exactly the guards in `selection` switched on. On success
  /// returns the set of all guarded formulas true in the model found, which
  /// always contains `selection`.
  std::optional<std::uint64_t> solve(std::uint64_t selection);

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace epsdiag::sat
