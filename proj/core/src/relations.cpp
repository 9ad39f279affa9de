#include "epsdiag/relations.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "epsdiag/sat.hpp"

namespace epsdiag {

namespace {

std::string k_text(std::optional<std::size_t> k) {
  return k ? std::to_string(*k) : std::string("-inf");
}

// L(psi) >lex L(~psi), scanning from cardinality n down to 0.
bool lex_greater(const CountVector& a, const CountVector& b) {
  for (std::size_t k = std::max(a.size(), b.size()); k-- > 0;) {
    const auto x = k < a.size() ? a[k] : 0;
    const auto y = k < b.size() ? b[k] : 0;
    if (x != y) return x > y;
  }
  return false;
}

// Per-cardinality count of consistent environments whose context proves a
// fixed formula, filled on demand.
class ScenarioCounter {
 public:
  ScenarioCounter(const KnowledgeBase& kb, const Formula& psi,
                  const std::vector<std::vector<Environment>>& by_size)
      : prover_(kb, psi), by_size_(by_size), counts_(by_size.size()) {}

  std::uint64_t at(std::size_t k) {
    if (!counts_[k]) {
      std::uint64_t c = 0;
      for (auto e : by_size_[k])
        if (prover_.entails(e)) ++c;
      counts_[k] = c;
    }
    return *counts_[k];
  }

  bool entails(Environment e) { return prover_.entails(e); }

 private:
  ContextProver prover_;
  const std::vector<std::vector<Environment>>& by_size_;
  std::vector<std::optional<std::uint64_t>> counts_;
};

}  // namespace

std::string_view name(Relation r) {
  static constexpr std::array<std::string_view, 9> names = {"r1", "r2", "r3", "r4", "r5",
                                                            "r6", "r7", "r8", "r9"};
  return names[static_cast<std::size_t>(r) - 1];
}

std::optional<Relation> parse_relation(std::string_view text) {
  if (text.size() != 2 || (text[0] != 'r' && text[0] != 'R') || text[1] < '1' || text[1] > '9')
    return std::nullopt;
  return static_cast<Relation>(text[1] - '0');
}

std::string_view mark(const Verdict& v) { return v.entailed ? "x" : "-"; }

Reasoner::Reasoner(KnowledgeBase kb) : Reasoner(std::make_shared<const BeliefEngine>(std::move(kb))) {}

Reasoner::Reasoner(std::shared_ptr<const BeliefEngine> engine) : engine_(std::move(engine)) {
  const auto& lattice = engine_->lattice();
  if (!lattice.facts_consistent()) return;
  classification_ = lattice.classify();
  by_size_.resize(lattice.size() + 1);
  for (auto e : lattice.consistent()) by_size_[e.size()].push_back(e);
}

const Classification& Reasoner::classification() const {
  if (!classification_) throw FactsInconsistentError();
  return *classification_;
}

QueryAnalysis Reasoner::analyze(const Formula& psi) const {
  const auto& cls = classification();
  const Formula refutation = Formula::negation(psi);

  QueryAnalysis q;
  q.query = psi;
  q.belief = engine_->belief(psi);
  q.disbelief = engine_->belief(refutation);

  ScenarioCounter pos(kb(), psi, by_size_);
  ScenarioCounter neg(kb(), refutation, by_size_);

  q.maxcard = cls.maxcard.size();
  for (auto e : cls.maxcard) {
    if (pos.entails(e)) ++q.maxcard_entailing;
    if (neg.entails(e)) ++q.maxcard_refuting;
  }
  // Proving is upward closed among consistent environments, so some
  // scenario proves psi iff some irredundant one does.
  for (auto e : cls.irredundant) {
    if (!q.witness && pos.entails(e)) q.witness = e;
    if (!q.counter_witness && neg.entails(e)) q.counter_witness = e;
  }

  const std::size_t n = kb().size();
  for (std::size_t k = n + 1; k-- > 0;) {
    if (pos.at(k) != 0) {
      q.scenario_k = k;
      break;
    }
  }
  for (std::size_t k = n + 1; k-- > 0;) {
    if (neg.at(k) != 0) {
      q.scenario_k_neg = k;
      break;
    }
  }
  for (std::size_t k = n + 1; k-- > 0;) {
    const auto a = pos.at(k);
    const auto b = neg.at(k);
    if (a != b) {
      q.diff_level = k;
      q.diff_pos = a;
      q.diff_neg = b;
      break;
    }
  }
  q.facts_entail = sat::entails(kb().facts(), psi);
  return q;
}

Verdict Reasoner::decide(const QueryAnalysis& q, Relation r) const {
  const BeliefReport& bp = q.belief;
  const BeliefReport& bn = q.disbelief;
  const auto m = q.maxcard_entailing;
  const auto p = q.maxcard;
  const EpsilonRatio zero;
  const EpsilonRatio half(EpsilonPoly(1), EpsilonPoly(2));

  bool by_belief = false;
  bool by_scenario = false;
  std::ostringstream ev;
  auto maxcard_summary = [&] {
    ev << "maxcard scenarios proving psi " << m << "/" << p << ", proving ~psi "
       << q.maxcard_refuting << "/" << p << "; lim Bel(psi)=" << bp.limit.get_str()
       << " lim Bel(~psi)=" << bn.limit.get_str();
  };
  auto scenario_summary = [&] {
    ev << "scenario proving psi " << (q.witness ? to_string(*q.witness) : "none")
       << ", proving ~psi " << (q.counter_witness ? to_string(*q.counter_witness) : "none");
  };

  switch (r) {
    case Relation::R1:
      by_belief = bp.limit == 1;
      by_scenario = m == p;
      maxcard_summary();
      break;
    case Relation::R2:
      by_belief = bp.limit > 0;
      by_scenario = m > 0;
      maxcard_summary();
      break;
    case Relation::R3:
      by_belief = bp.limit > 0 && bn.limit == 0;
      by_scenario = m > 0 && q.maxcard_refuting == 0;
      maxcard_summary();
      break;
    case Relation::R4:
      by_belief = eventually_greater(bp.bel, zero);
      by_scenario = q.witness.has_value();
      scenario_summary();
      break;
    case Relation::R5:
      by_belief = eventually_greater(bp.bel, zero) && bn.bel.is_zero();
      by_scenario = q.witness.has_value() && !q.counter_witness.has_value();
      scenario_summary();
      break;
    case Relation::R6:
      by_belief = eventually_greater(bp.bel, half);
      by_scenario = 2 * m > p;
      maxcard_summary();
      if (2 * m == p) ev << "; exact half tie, Bel(psi) - 1/2 eventually "
                         << (by_belief ? "positive" : "non-positive");
      break;
    case Relation::R7: {
      by_belief = eventually_greater(bp.bel, bn.bel);
      by_scenario = q.diff_level.has_value() && q.diff_pos > q.diff_neg;
      if (lex_greater(bp.lex, bn.lex) != by_belief)
        throw RouteDisagreement("lexicographic count comparison disagrees with the belief sign");
      ev << "L(psi)=" << to_string(bp.lex) << " L(~psi)=" << to_string(bn.lex);
      if (q.diff_level)
        ev << "; first difference at k=" << *q.diff_level << " (" << q.diff_pos << " vs "
           << q.diff_neg << ")";
      break;
    }
    case Relation::R8: {
      if (bp.bel.is_zero()) {
        by_belief = false;
      } else {
        const auto ratio_order = order_at_zero(EpsilonRatio(bn.bel.num(), bp.bel.num()));
        by_belief = !ratio_order || *ratio_order > 0;
      }
      by_scenario = q.scenario_k.has_value() &&
                    (!q.scenario_k_neg.has_value() || *q.scenario_k > *q.scenario_k_neg);
      ev << "k_psi=" << k_text(q.scenario_k) << " k_~psi=" << k_text(q.scenario_k_neg);
      break;
    }
    case Relation::R9:
      by_belief = bp.bel == EpsilonRatio(EpsilonPoly(1));
      by_scenario = q.facts_entail;
      ev << (q.facts_entail ? "F |= psi" : "F does not entail psi");
      break;
  }

  Verdict v;
  v.relation = r;
  v.query = q.query;
  v.belief_route = by_belief;
  v.scenario_route = by_scenario;
  v.entailed = by_scenario;
  v.evidence = ev.str();
  if (by_belief != by_scenario) {
    if (r != Relation::R6 || 2 * m != p)
      throw RouteDisagreement("routes disagree on " + std::string(name(r)) + " for " +
                              to_string(q.query) + ": " + v.evidence);
    v.tie_flagged = true;
  }
  return v;
}

Verdict Reasoner::decide(const Formula& psi, Relation r) const {
  if (r == Relation::R9 && !engine_->lattice().facts_consistent()) {
    Verdict v;
    v.relation = r;
    v.query = psi;
    v.entailed = v.belief_route = v.scenario_route = true;
    v.evidence = "F is inconsistent and entails everything";
    return v;
  }
  return decide(analyze(psi), r);
}

std::vector<Verdict> Reasoner::decide(const Formula& psi, std::span<const Relation> rels) const {
  std::vector<Verdict> out;
  out.reserve(rels.size());
  if (!engine_->lattice().facts_consistent()) {
    for (auto r : rels) out.push_back(decide(psi, r));
    return out;
  }
  const auto q = analyze(psi);
  for (auto r : rels) out.push_back(decide(q, r));
  return out;
}

Verdict decide(const KnowledgeBase& kb, const Formula& psi, Relation r) {
  return Reasoner(kb).decide(psi, r);
}

std::vector<std::vector<Verdict>> entailment_table(const KnowledgeBase& kb,
                                                   std::span<const Formula> queries,
                                                   std::span<const Relation> rels) {
  std::vector<std::vector<Verdict>> rows;
  if (queries.empty()) return rows;
  const Reasoner reasoner(kb);
  rows.reserve(queries.size());
  for (const auto& q : queries) rows.push_back(reasoner.decide(q, rels));
  return rows;
}

std::vector<Formula> literal_queries(const KnowledgeBase& kb) {
  std::set<std::string> names;
  for (const auto& f : kb.facts()) names.merge(atoms(f));
  for (const auto& f : kb.defaults()) names.merge(atoms(f));
  std::vector<Formula> out;
  out.reserve(2 * names.size());
  for (const auto& a : names) {
    out.push_back(Formula::atom(a));
    out.push_back(Formula::negation(Formula::atom(a)));
  }
  return out;
}

std::vector<Edge> derived_precedence_edges() {
  using R = Relation;
  return {{R::R9, R::R1}, {R::R1, R::R3}, {R::R1, R::R6}, {R::R3, R::R2},
          {R::R3, R::R8}, {R::R6, R::R2}, {R::R6, R::R7}, {R::R5, R::R8},
          {R::R8, R::R7}, {R::R7, R::R4}, {R::R2, R::R4}};
}

bool implied_by_edges(std::span<const Edge> edges, Relation from, Relation to) {
  std::set<Relation> seen{from};
  std::deque<Relation> frontier{from};
  while (!frontier.empty()) {
    const Relation cur = frontier.front();
    frontier.pop_front();
    if (cur == to) return true;
    for (const auto& e : edges)
      if (e.from == cur && seen.insert(e.to).second) frontier.push_back(e.to);
  }
  return false;
}

PrecedenceReport precedence_check(std::span<const KnowledgeBase> sample,
                                  std::span<const Edge> edges) {
  PrecedenceReport report;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Reasoner reasoner(sample[i]);
    if (!reasoner.engine().lattice().facts_consistent()) {
      ++report.kbs_skipped;
      continue;
    }
    ++report.kbs_checked;
    for (const auto& psi : literal_queries(sample[i])) {
      ++report.queries_checked;
      const auto q = reasoner.analyze(psi);
      std::array<std::optional<bool>, 9> verdicts;
      auto holds = [&](Relation r) {
        auto& slot = verdicts[static_cast<std::size_t>(r) - 1];
        if (!slot) slot = reasoner.decide(q, r).entailed;
        return *slot;
      };
      for (const auto& e : edges)
        if (holds(e.from) && !holds(e.to)) report.violations.push_back({i, psi, e});
    }
  }
  return report;
}

std::vector<SafetyFinding> safety_probe(const KnowledgeBase& kb, std::span<const Relation> rels,
                                        std::span<const Formula> extra) {
  const Reasoner reasoner(kb);
  std::vector<Formula> queries = literal_queries(kb);
  queries.insert(queries.end(), extra.begin(), extra.end());

  std::vector<QueryAnalysis> pos;
  std::vector<QueryAnalysis> neg;
  pos.reserve(queries.size());
  neg.reserve(queries.size());
  for (const auto& psi : queries) {
    pos.push_back(reasoner.analyze(psi));
    neg.push_back(reasoner.analyze(Formula::negation(psi)));
  }

  std::vector<SafetyFinding> out;
  for (auto r : rels) {
    SafetyFinding finding{r, std::nullopt};
    for (std::size_t i = 0; i < queries.size() && !finding.witness; ++i)
      if (reasoner.decide(pos[i], r).entailed && reasoner.decide(neg[i], r).entailed)
        finding.witness = queries[i];
    out.push_back(std::move(finding));
  }
  return out;
}

}  // namespace epsdiag
