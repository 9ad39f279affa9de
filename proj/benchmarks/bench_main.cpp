#include <benchmark/benchmark.h>

#include "epsdiag/belief.hpp"
#include "epsdiag/environments.hpp"
#include "epsdiag/random_kb.hpp"
#include "epsdiag/relations.hpp"
#include "epsdiag/sat.hpp"

using namespace epsdiag;

namespace {

KnowledgeBase sized_kb(std::size_t defaults, std::size_t atoms, std::uint64_t seed) {
  RandomKbOptions opts;
  opts.min_defaults = defaults;
  opts.max_defaults = defaults;
  opts.max_atoms = atoms;
  return KbGenerator(seed, opts).next();
}

std::vector<std::vector<Formula>> formula_sets(std::size_t atoms, std::size_t count) {
  KbGenerator gen(atoms);
  std::vector<std::vector<Formula>> sets(64);
  for (auto& s : sets)
    for (std::size_t i = 0; i < count; ++i) s.push_back(gen.formula(atoms, 3));
  return sets;
}

template <class B>
void BM_Satisfiable(benchmark::State& state) {
  const B backend;
  const auto sets = formula_sets(static_cast<std::size_t>(state.range(0)), 8);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sat::is_satisfiable(sets[i++ % sets.size()], backend));
}
BENCHMARK_TEMPLATE(BM_Satisfiable, sat::DpllBackend)->Arg(4)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK_TEMPLATE(BM_Satisfiable, sat::TruthTableBackend)->Arg(4)->Arg(8)->Arg(12);

void BM_Sweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto strategy = state.range(1) == 0 ? SweepStrategy::Reference : SweepStrategy::Pruned;
  const KnowledgeBase kb = sized_kb(n, 8, 5);
  for (auto _ : state) {
    const EnvironmentLattice lattice(kb, strategy);
    benchmark::DoNotOptimize(lattice.count_consistent());
  }
  state.SetLabel(strategy == SweepStrategy::Pruned ? "pruned" : "reference");
}
BENCHMARK(BM_Sweep)->ArgsProduct({{6, 10, 14}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_FullAnalysis(benchmark::State& state) {
  const KnowledgeBase kb = sized_kb(static_cast<std::size_t>(state.range(0)), 10, 14010);
  for (auto _ : state) {
    const Reasoner reasoner(kb);
    for (const auto& psi : literal_queries(kb))
      benchmark::DoNotOptimize(reasoner.decide(psi, kAllRelations));
  }
}
BENCHMARK(BM_FullAnalysis)->Arg(8)->Arg(11)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_Belief(benchmark::State& state) {
  const KnowledgeBase kb = sized_kb(static_cast<std::size_t>(state.range(0)), 6, 3);
  const BeliefEngine engine(kb);
  const auto queries = literal_queries(kb);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(engine.belief(queries[i++ % queries.size()]));
}
BENCHMARK(BM_Belief)->Arg(6)->Arg(12)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
