#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "epsdiag/belief.hpp"
#include "epsdiag/environments.hpp"
#include "epsdiag/epsilon.hpp"
#include "epsdiag/formula.hpp"
#include "epsdiag/knowledge_base.hpp"
#include "epsdiag/prioritized.hpp"
#include "epsdiag/random_kb.hpp"
#include "epsdiag/relations.hpp"
#include "epsdiag/sat.hpp"

namespace epsdiag::cli {

namespace {

enum class Format { Human, Tsv };

struct Options {
  Format format = Format::Human;
  std::string epsilon_text;
  std::optional<Rational> epsilon;
};

/// Unwinds a command with an exit code and a one-line message.
class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void print(std::ostream& out, const Options& opt, const Table& t) {
  if (opt.format == Format::Tsv) {
    for (const auto& row : t.rows) {
      out << t.name;
      for (const auto& cell : row) out << '\t' << cell;
      out << '\n';
    }
    return;
  }
  out << t.name << '\n';
  std::vector<std::size_t> width(t.header.size(), 0);
  auto grow = [&](const std::vector<std::string>& row) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  grow(t.header);
  for (const auto& row : t.rows) grow(row);
  auto line = [&](const std::vector<std::string>& row) {
    std::string s = "  ";
    for (std::size_t i = 0; i < row.size(); ++i) {
      s += row[i];
      if (i + 1 < row.size()) s += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out << s << '\n';
  };
  if (!t.header.empty()) line(t.header);
  for (const auto& row : t.rows) line(row);
}

void kv(std::ostream& out, const Options& opt, const std::string& key, const std::string& value) {
  if (opt.format == Format::Tsv)
    out << key << '\t' << value << '\n';
  else
    out << key << ": " << value << '\n';
}

std::string decimal(const Rational& q) {
  std::ostringstream os;
  os << std::setprecision(12) << q.get_d();
  return os.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string order_text(const std::optional<std::int64_t>& order) {
  return order ? std::to_string(*order) : "inf";
}

/// "1/3", "4/3*e^1", or "0".
std::string leading_text(const EpsilonRatio& r) {
  if (r.is_zero()) return "0";
  const auto order = *order_at_zero(r);
  const std::string c = leading_term(r).get_str();
  return order == 0 ? c : c + "*e^" + std::to_string(order);
}

std::string limit_text(const EpsilonRatio& r) {
  try {
    return limit_at_zero(r).get_str();
  } catch (const DivergesAtZero&) {
    return "inf";
  }
}

/// Column header and cell for the optional --epsilon evaluation.
void add_epsilon(const Options& opt, std::vector<std::string>& header) {
  if (opt.epsilon) header.push_back("at e=" + opt.epsilon_text);
}
void add_epsilon(const Options& opt, std::vector<std::string>& row, const EpsilonRatio& r) {
  if (opt.epsilon) row.push_back(decimal(r.evaluate(*opt.epsilon)));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kUsage, "error: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KnowledgeBase read_kb(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return load_kb(text);
  } catch (const ParseError& e) {
    throw Failure(kParse, "parse error: " + path + ": " + e.what());
  }
}

void require_consistent_facts(const KnowledgeBase& kb, const std::string& path) {
  if (!sat::is_satisfiable(kb.facts()))
    throw Failure(kFactsInconsistent, "facts-inconsistent: the facts of " + path +
                                          " are unsatisfiable");
}

KnowledgeBase read_usable_kb(const std::string& path) {
  KnowledgeBase kb = read_kb(path);
  require_consistent_facts(kb, path);
  return kb;
}

Formula read_query(const std::string& text) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    throw Failure(kParse, "parse error: query \"" + text + "\": " + e.what());
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// One formula per non-blank line; `#` starts a comment.
std::vector<Formula> read_queries(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<Formula> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    try {
      out.push_back(parse_formula(line));
    } catch (const ParseError& e) {
      const ParseError anchored(lineno, raw.find(line) + e.column(), e.message());
      throw Failure(kParse, "parse error: " + path + ": " + anchored.what());
    }
  }
  return out;
}

/// Lines `formula : x - x ...`, one mark per requested relation.
std::vector<std::pair<Formula, std::vector<bool>>> read_reference(const std::string& path,
                                                                  std::size_t columns) {
  const std::string text = read_file(path);
  std::vector<std::pair<Formula, std::vector<bool>>> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto bad = [&](const std::string& why) {
      return Failure(kParse, "parse error: " + path + ": line " + std::to_string(lineno) + ": " +
                                 why);
    };
    const auto colon = line.rfind(':');
    if (colon == std::string::npos) throw bad("expected 'formula : marks'");
    Formula f;
    try {
      f = parse_formula(line.substr(0, colon));
    } catch (const ParseError& e) {
      throw bad(e.message());
    }
    std::istringstream marks(line.substr(colon + 1));
    std::vector<bool> row;
    std::string m;
    while (marks >> m) {
      if (m != "x" && m != "-") throw bad("marks must be 'x' or '-'");
      row.push_back(m == "x");
    }
    if (row.size() != columns)
      throw bad("expected " + std::to_string(columns) + " marks, found " +
                std::to_string(row.size()));
    out.emplace_back(std::move(f), std::move(row));
  }
  return out;
}

std::vector<Relation> parse_relations(const std::string& text) {
  if (text == "all") return {kAllRelations.begin(), kAllRelations.end()};
  std::vector<Relation> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto r = parse_relation(trim(item));
    if (!r) throw Failure(kUsage, "error: unknown relation '" + item + "'");
    out.push_back(*r);
  }
  if (out.empty()) throw Failure(kUsage, "error: no relations given");
  return out;
}

std::string env_list(const std::vector<Environment>& envs) {
  std::string s;
  for (auto e : envs) s += (s.empty() ? "" : " ") + to_string(e);
  return s.empty() ? "none" : s;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ", ") + std::to_string(x);
  return "[" + s + "]";
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt, const std::string& path, std::ostream& out) {
  const KnowledgeBase kb = read_kb(path);
  const ValidationReport r = validate(kb);
  kv(out, opt, "facts", r.facts_satisfiable ? "satisfiable" : "unsatisfiable");
  kv(out, opt, "facts+defaults", r.all_satisfiable ? "satisfiable" : "unsatisfiable");
  kv(out, opt, "defaults", std::to_string(r.defaults));
  kv(out, opt, "levels", std::to_string(r.levels));
  kv(out, opt, "explicit levels", yes_no(r.explicit_levels));
  kv(out, opt, "level sizes", join(r.level_sizes));
  return kOk;
}

int cmd_inspect(const Options& opt, const std::string& path, std::ostream& out) {
  const BeliefEngine engine(read_usable_kb(path));
  const Classification cls = engine.lattice().classify();
  const std::size_t n = engine.kb().size();

  kv(out, opt, "defaults", std::to_string(n));
  kv(out, opt, "consistent by size", to_string(engine.lattice().count_consistent()));
  kv(out, opt, "Pr(consistent)", to_string(engine.prob_consistency()));
  if (opt.epsilon)
    kv(out, opt, "Pr(consistent) at e=" + opt.epsilon_text,
       decimal(engine.prob_consistency().evaluate(*opt.epsilon)));
  kv(out, opt, "maxcard size", std::to_string(cls.maxcard_size));
  kv(out, opt, "maxcard count", std::to_string(cls.maxcard.size()));

  auto by_size = [](std::vector<Environment> envs, bool descending) {
    std::sort(envs.begin(), envs.end(), [&](Environment a, Environment b) {
      if (a.size() != b.size()) return descending ? a.size() > b.size() : a.size() < b.size();
      return a.bits() < b.bits();
    });
    return envs;
  };

  Table irr{"irredundant", {"environment", "size", "limit", "order", "leading"}, {}};
  add_epsilon(opt, irr.header);
  for (auto e : by_size(cls.irredundant, true)) {
    const EpsilonRatio p = engine.posterior_env(e);
    std::vector<std::string> row = {to_string(e), std::to_string(e.size()), limit_text(p),
                                    order_text(order_at_zero(p)), leading_text(p)};
    add_epsilon(opt, row, p);
    irr.rows.push_back(std::move(row));
  }
  if (opt.format == Format::Human) out << '\n';
  print(out, opt, irr);

  const auto candidates = [&](const std::string& name, const std::vector<Environment>& envs) {
    Table t{name, {"candidate", "faults", "environment"}, {}};
    for (auto c : by_size(envs, false))
      t.rows.push_back({to_string(c), std::to_string(c.size()), to_string(c.complement(n))});
    if (opt.format == Format::Human) out << '\n';
    print(out, opt, t);
  };
  candidates("minimal candidates", cls.minimal_candidates);
  candidates("mincard candidates", cls.mincard_candidates);
  return kOk;
}

int cmd_fault(const Options& opt, const std::string& path, std::ostream& out) {
  const BeliefEngine engine(read_usable_kb(path));
  Table t{"fault", {"assumption", "default", "limit", "order", "leading"}, {}};
  add_epsilon(opt, t.header);
  for (std::size_t i = 0; i < engine.kb().size(); ++i) {
    const AssumptionId a{i};
    const EpsilonRatio p = engine.posterior_fault(a);
    std::vector<std::string> row = {"A" + std::to_string(i + 1), to_string(engine.kb().default_of(a)),
                                    limit_text(p), order_text(order_at_zero(p)), leading_text(p)};
    add_epsilon(opt, row, p);
    t.rows.push_back(std::move(row));
  }
  print(out, opt, t);
  return kOk;
}

int cmd_bel(const Options& opt, const std::string& path, const std::string& query,
            std::ostream& out) {
  const BeliefEngine engine(read_usable_kb(path));
  const Formula psi = read_query(query);
  const BeliefReport r = engine.belief(psi);
  const std::string k = r.k_psi ? std::to_string(*r.k_psi) : "-inf";
  if (opt.format == Format::Tsv) {
    out << "bel\t" << to_string(psi) << '\t' << to_string(r.bel) << '\t' << r.limit.get_str()
        << '\t' << order_text(r.order) << '\t' << k << '\t' << r.u_psi << '\t'
        << to_string(r.lex);
    if (opt.epsilon) out << '\t' << decimal(r.bel.evaluate(*opt.epsilon));
    out << '\n';
    return kOk;
  }
  out << "Bel(" << to_string(psi) << ") = " << to_string(r.bel) << '\n';
  out << "limit=" << r.limit.get_str() << " order=" << order_text(r.order) << '\n';
  out << "k_psi=" << k << " u_psi=" << r.u_psi << " L=" << to_string(r.lex) << '\n';
  if (opt.epsilon)
    out << "at e=" << opt.epsilon_text << ": " << decimal(r.bel.evaluate(*opt.epsilon)) << '\n';
  return kOk;
}

std::string route_mark(bool b) { return b ? "x" : "-"; }

int cmd_query(const Options& opt, const std::string& path, const std::string& query,
              const std::string& relations, std::ostream& out) {
  const auto rels = parse_relations(relations);
  const Reasoner reasoner(read_usable_kb(path));
  const Formula psi = read_query(query);
  Table t{"query", {"relation", "verdict", "belief", "scenario", "note", "evidence"}, {}};
  for (const auto& v : reasoner.decide(psi, rels)) {
    t.rows.push_back({std::string(name(v.relation)), std::string(mark(v)),
                      route_mark(v.belief_route), route_mark(v.scenario_route),
                      v.tie_flagged ? "tie" : "", v.evidence});
    if (opt.format == Format::Tsv) t.rows.back().insert(t.rows.back().begin(), to_string(psi));
  }
  if (opt.format == Format::Human) out << "query: " << to_string(psi) << '\n';
  print(out, opt, t);
  return kOk;
}

int cmd_table(const Options& opt, const std::string& path, const std::string& queries_path,
              const std::string& relations, const std::string& reference_path,
              std::ostream& out) {
  const auto rels = parse_relations(relations);
  const KnowledgeBase kb = read_usable_kb(path);
  const auto queries = read_queries(queries_path);
  std::vector<std::pair<Formula, std::vector<bool>>> reference;
  if (!reference_path.empty()) reference = read_reference(reference_path, rels.size());

  const auto cells = entailment_table(kb, queries, rels);
  std::vector<std::string> notes;
  Table t{"table", {"query"}, {}};
  for (auto r : rels) t.header.emplace_back(name(r));

  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::vector<bool>* ref = nullptr;
    for (const auto& [f, row] : reference)
      if (f == queries[i]) ref = &row;
    std::vector<std::string> row = {to_string(queries[i])};
    for (std::size_t j = 0; j < rels.size(); ++j) {
      const Verdict& v = cells[i][j];
      const bool mismatch = ref != nullptr && (*ref)[j] != v.entailed;
      if (opt.format == Format::Tsv) {
        out << "cell\t" << to_string(queries[i]) << '\t' << name(rels[j]) << '\t' << mark(v)
            << '\t' << (ref ? ((*ref)[j] ? "x" : "-") : "") << '\t'
            << (v.tie_flagged ? (mismatch ? "tie,mismatch" : "tie") : (mismatch ? "mismatch" : ""))
            << '\n';
        continue;
      }
      std::string cell(mark(v));
      if (v.tie_flagged) cell += "*";
      if (mismatch) cell += "!";
      row.push_back(cell);
      if (mismatch)
        notes.push_back("! (" + to_string(queries[i]) + ", " + std::string(name(rels[j])) +
                        "): computed " + std::string(mark(v)) + ", reference " +
                        ((*ref)[j] ? "x" : "-") + "; " + v.evidence);
      if (v.tie_flagged)
        notes.push_back("* (" + to_string(queries[i]) + ", " + std::string(name(rels[j])) +
                        "): exact-half tie decided by the scenario route; " + v.evidence);
    }
    t.rows.push_back(std::move(row));
  }
  if (opt.format == Format::Tsv) return kOk;
  print(out, opt, t);
  for (const auto& n : notes) out << n << '\n';
  return kOk;
}

int cmd_prioritized(const Options& opt, const std::string& path, const std::string& query,
                    std::ostream& out) {
  const KnowledgeBase kb = read_usable_kb(path);
  const PrioritizedReasoner pr(kb);
  const Formula psi = read_query(query);
  const EpsilonRatio bel = pr.belief(psi);
  const Verdict v = pr.entails(psi);

  std::vector<std::size_t> sizes(static_cast<std::size_t>(kb.level_count()), 0);
  for (int l : kb.levels()) ++sizes[static_cast<std::size_t>(l - 1)];
  std::vector<std::size_t> exps(pr.schedule().exponents.begin(), pr.schedule().exponents.end());

  kv(out, opt, "levels", std::to_string(kb.level_count()));
  kv(out, opt, "level sizes", join(sizes));
  kv(out, opt, "schedule exponents", join(exps));
  kv(out, opt, "preferred", env_list(pr.preferred()));
  kv(out, opt, "nonvanishing", env_list(pr.nonvanishing()));
  kv(out, opt, "query", to_string(psi));
  kv(out, opt, "Bel", to_string(bel));
  kv(out, opt, "limit", limit_text(bel));
  kv(out, opt, "order", order_text(order_at_zero(bel)));
  if (opt.epsilon) kv(out, opt, "at e=" + opt.epsilon_text, decimal(bel.evaluate(*opt.epsilon)));
  kv(out, opt, "entailed", yes_no(v.entailed));
  kv(out, opt, "evidence", v.evidence);
  return kOk;
}

struct RandomCheckArgs {
  std::size_t kbs = 200;
  std::size_t max_defaults = 6;
  std::size_t max_atoms = 5;
  std::uint64_t seed = 1;
};

int cmd_random_check(const Options& opt, const RandomCheckArgs& a, std::ostream& out) {
  if (a.max_defaults == 0 || a.max_defaults > EnvironmentLattice::kMaxDefaults)
    throw Failure(kUsage, "error: --max-defaults must be in 1.." +
                              std::to_string(EnvironmentLattice::kMaxDefaults));
  if (a.max_atoms == 0) throw Failure(kUsage, "error: --max-atoms must be positive");
  RandomKbOptions gen;
  gen.max_defaults = a.max_defaults;
  gen.max_atoms = a.max_atoms;

  const auto edges = derived_precedence_edges();
  std::size_t cells = 0;
  std::size_t disagreements = 0;
  std::size_t ties = 0;
  std::size_t violations = 0;
  std::vector<std::string> messages;
  std::map<Relation, std::optional<std::string>> unsafe;
  for (auto r : kAllRelations) unsafe[r] = std::nullopt;

  const auto corpus = random_corpus(a.seed, a.kbs, gen);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Reasoner reasoner(corpus[i]);
    const auto queries = literal_queries(corpus[i]);
    std::vector<std::map<Relation, bool>> verdicts(queries.size());
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      const QueryAnalysis q = reasoner.analyze(queries[qi]);
      for (auto r : kAllRelations) {
        ++cells;
        try {
          const Verdict v = reasoner.decide(q, r);
          verdicts[qi][r] = v.entailed;
          if (v.tie_flagged) ++ties;
        } catch (const RouteDisagreement& e) {
          ++disagreements;
          messages.push_back("disagreement: kb " + std::to_string(i) + ": " + e.what());
        }
      }
      for (const auto& e : edges) {
        const auto& vs = verdicts[qi];
        if (vs.contains(e.from) && vs.contains(e.to) && vs.at(e.from) && !vs.at(e.to)) {
          ++violations;
          messages.push_back("violation: kb " + std::to_string(i) + ", query " +
                             to_string(queries[qi]) + ": " + std::string(name(e.from)) + " -> " +
                             std::string(name(e.to)));
        }
      }
    }
    // literal_queries lists each atom followed by its negation.
    for (std::size_t qi = 0; qi + 1 < queries.size(); qi += 2)
      for (auto r : kAllRelations)
        if (!unsafe[r] && verdicts[qi].contains(r) && verdicts[qi + 1].contains(r) &&
            verdicts[qi][r] && verdicts[qi + 1][r])
          unsafe[r] = "kb " + std::to_string(i) + ", " + to_string(queries[qi]);
  }

  std::size_t collapse_mismatches = 0;
  const auto consistent = random_consistent_corpus(a.seed, a.kbs, gen);
  for (std::size_t i = 0; i < consistent.size(); ++i) {
    const KnowledgeBase& kb = consistent[i];
    const Reasoner reasoner(kb);
    std::vector<Formula> all = kb.facts();
    all.insert(all.end(), kb.defaults().begin(), kb.defaults().end());
    for (const auto& psi : literal_queries(kb)) {
      const bool classical = sat::entails(all, psi);
      const bool from_facts = sat::entails(kb.facts(), psi);
      const QueryAnalysis q = reasoner.analyze(psi);
      for (auto r : kAllRelations) {
        const bool expected = r == Relation::R9 ? from_facts : classical;
        bool got = false;
        try {
          got = reasoner.decide(q, r).entailed;
        } catch (const RouteDisagreement& e) {
          got = !expected;
        }
        if (got != expected) {
          ++collapse_mismatches;
          messages.push_back("collapse: kb " + std::to_string(i) + ", query " + to_string(psi) +
                             ", " + std::string(name(r)));
        }
      }
    }
  }

  std::size_t unexpected_unsafe = 0;
  std::string safety;
  for (auto r : kAllRelations) {
    const bool expected_unsafe = r == Relation::R2 || r == Relation::R4;
    if (unsafe[r] && !expected_unsafe) ++unexpected_unsafe;
    safety += (safety.empty() ? "" : " ") + std::string(name(r)) + "=" +
              (unsafe[r] ? "unsafe" : "safe");
  }

  const bool ok = disagreements == 0 && violations == 0 && collapse_mismatches == 0 &&
                  unexpected_unsafe == 0;
  kv(out, opt, "corpus", std::to_string(a.kbs) + " KBs, seed " + std::to_string(a.seed) +
                             ", max defaults " + std::to_string(a.max_defaults) +
                             ", max atoms " + std::to_string(a.max_atoms));
  kv(out, opt, "route agreement",
     std::to_string(cells) + " cells, " + std::to_string(disagreements) + " disagreements, " +
         std::to_string(ties) + " flagged r6 ties");
  kv(out, opt, "precedence",
     std::to_string(edges.size()) + " edges, " + std::to_string(violations) + " violations");
  kv(out, opt, "consistent collapse",
     std::to_string(consistent.size()) + " KBs, " + std::to_string(collapse_mismatches) +
         " mismatches");
  kv(out, opt, "safety", safety);
  for (auto r : kAllRelations)
    if (unsafe[r]) kv(out, opt, "unsafe " + std::string(name(r)), *unsafe[r]);
  for (const auto& m : messages) out << m << '\n';
  kv(out, opt, "result", ok ? "ok" : "FAILED");
  return ok ? kOk : kPropertyFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact belief-of-deducibility analysis of default knowledge bases", "epsdiag"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  std::string format = "human";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "tsv"}))
      ->capture_default_str();
  app.add_option("--epsilon", opt.epsilon_text, "Also evaluate every ratio at e = p/q");

  std::string kb_path;
  std::string query;
  std::string relations = "all";
  std::string queries_path;
  std::string reference_path;
  RandomCheckArgs rc;
  std::function<int()> action;

  auto* validate_cmd = app.add_subcommand("validate", "Check the facts and defaults for satisfiability");
  validate_cmd->add_option("kb", kb_path, "Knowledge base file")->required();
  validate_cmd->callback([&] { action = [&] { return cmd_validate(opt, kb_path, out); }; });

  auto* inspect_cmd = app.add_subcommand("inspect", "Environments, candidates and posteriors");
  inspect_cmd->add_option("kb", kb_path, "Knowledge base file")->required();
  inspect_cmd->callback([&] { action = [&] { return cmd_inspect(opt, kb_path, out); }; });

  auto* fault_cmd = app.add_subcommand("fault", "Posterior fault probability of each assumption");
  fault_cmd->add_option("kb", kb_path, "Knowledge base file")->required();
  fault_cmd->callback([&] { action = [&] { return cmd_fault(opt, kb_path, out); }; });

  auto* bel_cmd = app.add_subcommand("bel", "Belief of deducibility of a formula");
  bel_cmd->add_option("kb", kb_path, "Knowledge base file")->required();
  bel_cmd->add_option("formula", query, "Query")->required();
  bel_cmd->callback([&] { action = [&] { return cmd_bel(opt, kb_path, query, out); }; });

  auto* query_cmd = app.add_subcommand("query", "Decide consequence relations for a formula");
  query_cmd->add_option("kb", kb_path, "Knowledge base file")->required();
  query_cmd->add_option("formula", query, "Query")->required();
  query_cmd->add_option("--relation,--relations", relations, "rX, a comma list, or all")
      ->capture_default_str();
  query_cmd->callback(
      [&] { action = [&] { return cmd_query(opt, kb_path, query, relations, out); }; });

  auto* table_cmd = app.add_subcommand("table", "Entailment matrix for a file of queries");
  table_cmd->add_option("kb", kb_path, "Knowledge base file")->required();
  table_cmd->add_option("queries", queries_path, "One formula per line")->required();
  table_cmd->add_option("--relations,--relation", relations, "Comma list of rX, or all")
      ->capture_default_str();
  table_cmd->add_option("--expected", reference_path,
                        "Reference marks ('formula : x - ...'); differing cells are annotated");
  table_cmd->callback([&] {
    action = [&] {
      return cmd_table(opt, kb_path, queries_path, relations, reference_path, out);
    };
  });

  auto* prio_cmd = app.add_subcommand("prioritized", "Lexicographic entailment over priority levels");
  prio_cmd->add_option("kb", kb_path, "Knowledge base file")->required();
  prio_cmd->add_option("formula", query, "Query")->required();
  prio_cmd->callback([&] { action = [&] { return cmd_prioritized(opt, kb_path, query, out); }; });

  auto* rc_cmd = app.add_subcommand("random-check", "Property sweeps over seeded random KBs");
  rc_cmd->add_option("--kbs", rc.kbs, "Number of KBs")->capture_default_str();
  rc_cmd->add_option("--max-defaults", rc.max_defaults, "Defaults per KB")->capture_default_str();
  rc_cmd->add_option("--max-atoms", rc.max_atoms, "Atoms per KB")->capture_default_str();
  rc_cmd->add_option("--seed", rc.seed, "Generator seed")->capture_default_str();
  rc_cmd->callback([&] { action = [&] { return cmd_random_check(opt, rc, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    opt.format = format == "tsv" ? Format::Tsv : Format::Human;
    if (!opt.epsilon_text.empty()) {
      Rational e;
      if (e.set_str(opt.epsilon_text, 10) != 0 || e.get_den() == 0)
        throw Failure(kUsage, "error: --epsilon expects p/q, got " + opt.epsilon_text);
      e.canonicalize();
      if (e <= 0 || e >= 1) throw Failure(kUsage, "error: --epsilon must lie in (0, 1)");
      opt.epsilon = e;
    }
    return action();
  } catch (const Failure& f) {
    err << f.what() << '\n';
    return f.code();
  } catch (const FactsInconsistentError& e) {
    err << "facts-inconsistent: " << e.what() << '\n';
    return kFactsInconsistent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace epsdiag::cli
