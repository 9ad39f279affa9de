#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epsdiag/formula.hpp"
#include "epsdiag/knowledge_base.hpp"

namespace epsdiag {

struct RandomKbOptions {
  std::size_t min_defaults = 1;
  std::size_t max_defaults = 6;
  std::size_t max_atoms = 5;
  std::size_t max_facts = 1;
  std::size_t max_depth = 2;
  /// Levels per base; 1 gives an unprioritized base.
  int min_levels = 1;
  int max_levels = 1;
};

/// Seeded generator of small knowledge bases. The sequence depends only on
/// the seed and the options, on every platform.
class KbGenerator {
 public:
  explicit KbGenerator(std::uint64_t seed, RandomKbOptions options = {});

  /// Name of the i-th atom: a, b, ..., z, a26, a27, ...
  static std::string atom_name(std::size_t i);

  Formula formula(std::size_t atoms, std::size_t depth);
  /// Facts are always satisfiable.
  KnowledgeBase next();
  /// F ∪ Δ is satisfiable.
  KnowledgeBase next_consistent();

 private:
  std::size_t draw(std::size_t lo, std::size_t hi);  // inclusive
  KnowledgeBase generate(bool consistent);

  std::mt19937_64 rng_;
  RandomKbOptions options_;
};

std::vector<KnowledgeBase> random_corpus(std::uint64_t seed, std::size_t count,
                                         RandomKbOptions options = {});
std::vector<KnowledgeBase> random_consistent_corpus(std::uint64_t seed, std::size_t count,
                                                    RandomKbOptions options = {});

}  // namespace epsdiag
