#include "epsdiag/sat.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace epsdiag::sat {

namespace {

using Var = std::uint32_t;
using Lit = std::uint32_t;

constexpr Lit pos(Var v) { return v << 1; }
constexpr Lit neg(Lit l) { return l ^ 1U; }
constexpr Var var_of(Lit l) { return l >> 1; }
constexpr bool is_negative(Lit l) { return (l & 1U) != 0; }

// Clause database with Tseitin encoding of formulas and a chronological
// DPLL search using two watched literals. Search state (assignments, watch
// order) survives between calls to solve(); every call starts from an
// empty assignment.
class Cnf {
 public:
  Cnf() { truth_ = new_var(); units_.push_back(pos(truth_)); }

  Var new_var() {
    assigns_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    return static_cast<Var>(assigns_.size() - 1);
  }

  Var atom_var(const std::string& name) {
    auto [it, inserted] = atoms_.try_emplace(name, 0);
    if (inserted) {
      it->second = new_var();
      order_dirty_ = true;
    }
    return it->second;
  }

  const std::map<std::string, Var>& atom_vars() const { return atoms_; }

  Lit encode(const Formula& f) {
    switch (f.kind()) {
      case Connective::True: return pos(truth_);
      case Connective::False: return neg(pos(truth_));
      case Connective::Atom: return pos(atom_var(f.name()));
      case Connective::Not: return neg(encode(f.child()));
      default: break;
    }
    Lit a = encode(f.left());
    const Lit b = encode(f.right());
    const Lit g = pos(new_var());
    switch (f.kind()) {
      case Connective::And:
        add_clause({neg(g), a});
        add_clause({neg(g), b});
        add_clause({g, neg(a), neg(b)});
        break;
      case Connective::Implies:
        a = neg(a);
        [[fallthrough]];
      case Connective::Or:
        add_clause({g, neg(a)});
        add_clause({g, neg(b)});
        add_clause({neg(g), a, b});
        break;
      default:  // Iff
        add_clause({neg(g), neg(a), b});
        add_clause({neg(g), a, neg(b)});
        add_clause({g, a, b});
        add_clause({g, neg(a), neg(b)});
        break;
    }
    return g;
  }

  void add_clause(std::vector<Lit> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
      if (lits[i] == neg(lits[i - 1])) return;  // tautology
    if (lits.size() == 1) {
      units_.push_back(lits[0]);
      return;
    }
    const auto idx = static_cast<std::uint32_t>(clauses_.size());
    watches_[lits[0]].push_back(idx);
    watches_[lits[1]].push_back(idx);
    clauses_.push_back(std::move(lits));
  }

  void add_unit(Lit l) { units_.push_back(l); }

  // Search under the unit clauses plus `assumptions`.
  bool solve(const std::vector<Lit>& assumptions) {
    refresh_order();
    std::fill(assigns_.begin(), assigns_.end(), std::int8_t{0});
    trail_.clear();
    decisions_.clear();
    qhead_ = 0;
    for (Lit l : units_)
      if (!enqueue(l)) return false;
    for (Lit l : assumptions)
      if (!enqueue(l)) return false;
    if (!propagate()) return false;

    for (;;) {
      const auto next = pick_branch();
      if (!next) return true;
      decisions_.push_back({trail_.size(), *next, false});
      enqueue(*next);
      while (!propagate()) {
        if (!backtrack()) return false;
      }
    }
  }

  // Only meaningful right after solve() returned true.
  bool model_value(Lit l) const { return value(l) > 0; }

 private:
  struct Decision {
    std::size_t trail_size;
    Lit lit;
    bool flipped;
  };

  std::int8_t value(Lit l) const {
    const std::int8_t v = assigns_[var_of(l)];
    return is_negative(l) ? static_cast<std::int8_t>(-v) : v;
  }

  bool enqueue(Lit l) {
    const auto v = value(l);
    if (v > 0) return true;
    if (v < 0) return false;
    assigns_[var_of(l)] = is_negative(l) ? -1 : 1;
    trail_.push_back(l);
    return true;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      const Lit falsified = neg(trail_[qhead_++]);
      auto& ws = watches_[falsified];
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ws.size()) {
        const auto ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) > 0) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (!enqueue(c[0])) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          return false;
        }
      }
      ws.resize(j);
    }
    return true;
  }

  // Undo the most recent unflipped decision and try its other polarity.
  bool backtrack() {
    while (!decisions_.empty()) {
      Decision d = decisions_.back();
      decisions_.pop_back();
      while (trail_.size() > d.trail_size) {
        assigns_[var_of(trail_.back())] = 0;
        trail_.pop_back();
      }
      qhead_ = trail_.size();
      if (!d.flipped) {
        decisions_.push_back({trail_.size(), neg(d.lit), true});
        enqueue(neg(d.lit));
        return true;
      }
    }
    return false;
  }

  std::optional<Lit> pick_branch() const {
    for (Var v : order_)
      if (assigns_[v] == 0) return neg(pos(v));
    // Gate variables are fixed by propagation once their inputs are; this
    // only fires for variables no atom reaches.
    for (Var v = 0; v < assigns_.size(); ++v)
      if (assigns_[v] == 0) return neg(pos(v));
    return std::nullopt;
  }

  void refresh_order() {
    if (!order_dirty_) return;
    order_.clear();
    for (const auto& [name, v] : atoms_) order_.push_back(v);  // map is name-ordered
    order_dirty_ = false;
  }

  Var truth_ = 0;
  std::map<std::string, Var> atoms_;
  std::vector<Var> order_;
  bool order_dirty_ = true;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<Lit> units_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<Lit> trail_;
  std::vector<Decision> decisions_;
  std::size_t qhead_ = 0;
};

// Formula over atom indices, evaluated against a bit-packed valuation.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const std::map<std::string, std::size_t>& index) {
    compile(f, index);
  }

  bool eval(std::uint32_t bits) const {
    std::vector<bool> stack;
    stack.reserve(ops_.size());
    for (const auto& op : ops_) {
      switch (op.kind) {
        case Connective::True: stack.push_back(true); break;
        case Connective::False: stack.push_back(false); break;
        case Connective::Atom: stack.push_back(((bits >> op.atom) & 1U) != 0); break;
        case Connective::Not: stack.back() = !stack.back(); break;
        default: {
          const bool r = stack.back();
          stack.pop_back();
          const bool l = stack.back();
          switch (op.kind) {
            case Connective::And: stack.back() = l && r; break;
            case Connective::Or: stack.back() = l || r; break;
            case Connective::Implies: stack.back() = !l || r; break;
            default: stack.back() = l == r; break;
          }
        }
      }
    }
    return stack.back();
  }

 private:
  struct Op {
    Connective kind;
    std::size_t atom;
  };

  void compile(const Formula& f, const std::map<std::string, std::size_t>& index) {
    switch (f.kind()) {
      case Connective::Atom: ops_.push_back({f.kind(), index.at(f.name())}); return;
      case Connective::True:
      case Connective::False: ops_.push_back({f.kind(), 0}); return;
      case Connective::Not:
        compile(f.child(), index);
        ops_.push_back({f.kind(), 0});
        return;
      default:
        compile(f.left(), index);
        compile(f.right(), index);
        ops_.push_back({f.kind(), 0});
    }
  }

  std::vector<Op> ops_;
};

}  // namespace

std::optional<Valuation> TruthTableBackend::find_model(std::span<const Formula> fs) const {
  std::set<std::string> names;
  for (const auto& f : fs) names.merge(atoms(f));
  if (names.size() > kMaxAtoms)
    throw std::length_error("truth-table backend limited to " + std::to_string(kMaxAtoms) +
                            " atoms, got " + std::to_string(names.size()));
  std::map<std::string, std::size_t> index;
  for (const auto& n : names) index.emplace(n, index.size());
  std::vector<CompiledFormula> compiled;
  compiled.reserve(fs.size());
  for (const auto& f : fs) compiled.emplace_back(f, index);

  const std::uint64_t rows = std::uint64_t{1} << names.size();
  for (std::uint64_t row = 0; row < rows; ++row) {
    const auto bits = static_cast<std::uint32_t>(row);
    if (std::all_of(compiled.begin(), compiled.end(),
                    [bits](const CompiledFormula& c) { return c.eval(bits); })) {
      Valuation v;
      for (const auto& [name, i] : index) v.emplace(name, ((bits >> i) & 1U) != 0);
      return v;
    }
  }
  return std::nullopt;
}

std::optional<Valuation> DpllBackend::find_model(std::span<const Formula> fs) const {
  Cnf cnf;
  for (const auto& f : fs) cnf.add_unit(cnf.encode(f));
  if (!cnf.solve({})) return std::nullopt;
  Valuation v;
  for (const auto& [name, var] : cnf.atom_vars()) v.emplace(name, cnf.model_value(pos(var)));
  return v;
}

const Backend& default_backend() {
  static const DpllBackend backend;
  return backend;
}

bool is_satisfiable(std::span<const Formula> fs, const Backend& backend) {
  return backend.find_model(fs).has_value();
}

bool entails(std::span<const Formula> fs, const Formula& q, const Backend& backend) {
  std::vector<Formula> all(fs.begin(), fs.end());
  all.push_back(Formula::negation(q));
  return !is_satisfiable(all, backend);
}

class GuardedTheory::Impl {
 public:
  Cnf cnf;
  std::vector<Var> selectors;
  std::vector<Lit> roots;
};

GuardedTheory::GuardedTheory() : impl_(std::make_unique<Impl>()) {}
GuardedTheory::GuardedTheory(const GuardedTheory& other)
    : impl_(std::make_unique<Impl>(*other.impl_)) {}
GuardedTheory& GuardedTheory::operator=(const GuardedTheory& other) {
  if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}
GuardedTheory::GuardedTheory(GuardedTheory&&) noexcept = default;
GuardedTheory& GuardedTheory::operator=(GuardedTheory&&) noexcept = default;
GuardedTheory::~GuardedTheory() = default;

void GuardedTheory::add_hard(const Formula& f) { impl_->cnf.add_unit(impl_->cnf.encode(f)); }

std::size_t GuardedTheory::add_guarded(const Formula& f) {
  if (impl_->selectors.size() == kMaxGuards)
    throw std::length_error("at most 64 guarded formulas are supported");
  const Lit root = impl_->cnf.encode(f);
  const Var sel = impl_->cnf.new_var();
  impl_->cnf.add_clause({neg(pos(sel)), root});
  impl_->selectors.push_back(sel);
  impl_->roots.push_back(root);
  return impl_->selectors.size() - 1;
}

std::size_t GuardedTheory::guard_count() const { return impl_->selectors.size(); }

std::optional<std::uint64_t> GuardedTheory::solve(std::uint64_t selection) {
  std::vector<Lit> assumptions;
  assumptions.reserve(impl_->selectors.size());
  for (std::size_t i = 0; i < impl_->selectors.size(); ++i) {
    const Lit s = pos(impl_->selectors[i]);
    assumptions.push_back(((selection >> i) & 1U) != 0 ? s : neg(s));
  }
  if (!impl_->cnf.solve(assumptions)) return std::nullopt;
  std::uint64_t cover = 0;
  for (std::size_t i = 0; i < impl_->roots.size(); ++i)
    if (impl_->cnf.model_value(impl_->roots[i])) cover |= std::uint64_t{1} << i;
  return cover;
}

}  // namespace epsdiag::sat
