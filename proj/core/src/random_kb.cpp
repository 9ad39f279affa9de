#include "epsdiag/random_kb.hpp"

#include <algorithm>
#include <stdexcept>

#include "epsdiag/sat.hpp"

namespace epsdiag {

KbGenerator::KbGenerator(std::uint64_t seed, RandomKbOptions options)
    : rng_(seed), options_(options) {
  if (options_.max_atoms == 0) throw std::invalid_argument("need at least one atom");
  if (options_.min_defaults > options_.max_defaults)
    throw std::invalid_argument("min_defaults exceeds max_defaults");
  if (options_.min_levels < 1 || options_.min_levels > options_.max_levels)
    throw std::invalid_argument("invalid level range");
}

std::string KbGenerator::atom_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "a" + std::to_string(i);
}

std::size_t KbGenerator::draw(std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
}

Formula KbGenerator::formula(std::size_t atoms, std::size_t depth) {
  if (depth == 0 || draw(0, 9) < 3) {
    Formula a = Formula::atom(atom_name(draw(0, atoms - 1)));
    return draw(0, 1) == 0 ? a : Formula::negation(a);
  }
  Formula l = formula(atoms, depth - 1);
  Formula r = formula(atoms, depth - 1);
  switch (draw(0, 9)) {
    case 0:
    case 1:
    case 2:
    case 3: return Formula::conjunction(l, r);
    case 4:
    case 5:
    case 6: return Formula::disjunction(l, r);
    case 7:
    case 8: return Formula::implication(l, r);
    default: return Formula::equivalence(l, r);
  }
}

KnowledgeBase KbGenerator::generate(bool consistent) {
  for (;;) {
    const std::size_t atoms = draw(1, options_.max_atoms);
    std::vector<Formula> facts(draw(0, options_.max_facts));
    for (auto& f : facts) f = formula(atoms, options_.max_depth);
    if (!sat::is_satisfiable(facts)) continue;

    std::vector<Formula> defaults(draw(options_.min_defaults, options_.max_defaults));
    for (auto& d : defaults) d = formula(atoms, options_.max_depth);
    if (consistent) {
      std::vector<Formula> all = facts;
      all.insert(all.end(), defaults.begin(), defaults.end());
      if (!sat::is_satisfiable(all)) continue;
    }

    const int levels = static_cast<int>(draw(static_cast<std::size_t>(options_.min_levels),
                                             static_cast<std::size_t>(options_.max_levels)));
    if (levels == 1) return KnowledgeBase(std::move(facts), std::move(defaults));
    std::vector<int> level_of(defaults.size());
    for (auto& l : level_of) l = static_cast<int>(draw(1, static_cast<std::size_t>(levels)));
    std::sort(level_of.begin(), level_of.end());  // each level contiguous, like a file
    return KnowledgeBase(std::move(facts), std::move(defaults), std::move(level_of), levels);
  }
}

KnowledgeBase KbGenerator::next() { return generate(false); }
KnowledgeBase KbGenerator::next_consistent() { return generate(true); }

std::vector<KnowledgeBase> random_corpus(std::uint64_t seed, std::size_t count,
                                         RandomKbOptions options) {
  KbGenerator gen(seed, options);
  std::vector<KnowledgeBase> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next());
  return out;
}

std::vector<KnowledgeBase> random_consistent_corpus(std::uint64_t seed, std::size_t count,
                                                    RandomKbOptions options) {
  KbGenerator gen(seed, options);
  std::vector<KnowledgeBase> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next_consistent());
  return out;
}

}  // namespace epsdiag
