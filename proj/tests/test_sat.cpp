#include <doctest.h>

#include <bit>

#include "epsdiag/formula.hpp"
#include "epsdiag/random_kb.hpp"
#include "epsdiag/sat.hpp"

using namespace epsdiag;

namespace {

bool satisfies(const Valuation& v, const std::vector<Formula>& fs) {
  for (const auto& f : fs)
    if (!evaluate(f, v)) return false;
  return true;
}

std::set<std::string> atoms_of(const std::vector<Formula>& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) {
    auto a = atoms(f);
    out.insert(a.begin(), a.end());
  }
  return out;
}

}  // namespace

TEST_CASE("small fixed instances") {
  const sat::DpllBackend dpll;
  const std::vector<Formula> contradiction = {parse_formula("a"), parse_formula("~a")};
  CHECK_FALSE(sat::is_satisfiable(contradiction, dpll));
  CHECK(sat::is_satisfiable(std::vector<Formula>{}, dpll));
  CHECK_FALSE(sat::is_satisfiable(std::vector<Formula>{Formula::bottom()}, dpll));
  CHECK(sat::is_satisfiable(std::vector<Formula>{Formula::top()}, dpll));

  const std::vector<Formula> facts = {parse_formula("a -> b"), parse_formula("b -> c"),
                                      parse_formula("a")};
  CHECK(sat::entails(facts, parse_formula("c"), dpll));
  CHECK_FALSE(sat::entails(facts, parse_formula("~c"), dpll));
  CHECK(sat::entails(std::vector<Formula>{}, parse_formula("p | ~p"), dpll));
}

TEST_CASE("dpll agrees with the truth table on random formula sets") {
  const sat::DpllBackend dpll;
  const sat::TruthTableBackend table;
  KbGenerator gen(2024);
  std::size_t sat_count = 0;
  for (int round = 0; round < 600; ++round) {
    const std::size_t atoms = 1 + static_cast<std::size_t>(round % 12);
    std::vector<Formula> fs;
    for (int i = 0; i < 1 + round % 7; ++i) fs.push_back(gen.formula(atoms, 3));
    const auto m1 = dpll.find_model(fs);
    const auto m2 = table.find_model(fs);
    CAPTURE(round);
    REQUIRE(m1.has_value() == m2.has_value());
    if (!m1) continue;
    ++sat_count;
    CHECK(satisfies(*m1, fs));
    std::set<std::string> covered;
    for (const auto& [k, v] : *m1) covered.insert(k);
    CHECK(covered == atoms_of(fs));
  }
  // Both outcomes must be exercised.
  CHECK(sat_count > 50);
  CHECK(sat_count < 590);
}

TEST_CASE("truth table refuses too many atoms") {
  Formula big = Formula::top();
  for (std::size_t i = 0; i <= sat::TruthTableBackend::kMaxAtoms; ++i)
    big = Formula::conjunction(big, Formula::atom(KbGenerator::atom_name(i)));
  const sat::TruthTableBackend table;
  CHECK_THROWS(table.find_model(std::vector<Formula>{big}));
  CHECK(sat::is_satisfiable(std::vector<Formula>{big}));
}

TEST_CASE("guarded theory matches fresh solves under every selection") {
  KbGenerator gen(99);
  const sat::TruthTableBackend table;
  for (int round = 0; round < 60; ++round) {
    const std::size_t atoms = 2 + static_cast<std::size_t>(round % 5);
    const std::vector<Formula> hard = {gen.formula(atoms, 2)};
    std::vector<Formula> guarded;
    for (int i = 0; i < 5; ++i) guarded.push_back(gen.formula(atoms, 2));

    sat::GuardedTheory theory;
    for (const auto& h : hard) theory.add_hard(h);
    for (std::size_t i = 0; i < guarded.size(); ++i) CHECK(theory.add_guarded(guarded[i]) == i);
    CHECK(theory.guard_count() == guarded.size());

    sat::GuardedTheory copy = theory;
    for (std::uint64_t sel = 0; sel < 32; ++sel) {
      std::vector<Formula> fs = hard;
      for (std::size_t i = 0; i < 5; ++i)
        if ((sel >> i) & 1U) fs.push_back(guarded[i]);
      const bool expected = table.find_model(fs).has_value();
      const auto cover = theory.solve(sel);
      CAPTURE(round);
      CAPTURE(sel);
      REQUIRE(cover.has_value() == expected);
      CHECK(copy.solve(sel).has_value() == expected);
      if (!cover) continue;
      CHECK((*cover & sel) == sel);
      // The cover is realized by one model, so it is jointly satisfiable.
      std::vector<Formula> all = hard;
      for (std::size_t i = 0; i < 5; ++i)
        if ((*cover >> i) & 1U) all.push_back(guarded[i]);
      CHECK(table.find_model(all).has_value());
    }
  }
}
