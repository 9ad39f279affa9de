#include "epsdiag/knowledge_base.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "epsdiag/sat.hpp"

namespace epsdiag {

KnowledgeBase::KnowledgeBase(std::vector<Formula> facts, std::vector<Formula> defaults)
    : facts_(std::move(facts)),
      defaults_(std::move(defaults)),
      levels_(defaults_.size(), 1) {}

KnowledgeBase::KnowledgeBase(std::vector<Formula> facts, std::vector<Formula> defaults,
                             std::vector<int> levels, int level_count)
    : facts_(std::move(facts)),
      defaults_(std::move(defaults)),
      levels_(std::move(levels)),
      explicit_levels_(true) {
  if (levels_.size() != defaults_.size())
    throw std::invalid_argument("level assignment must cover every default");
  int top = 1;
  for (int l : levels_) {
    if (l < 1) throw std::invalid_argument("levels start at 1");
    top = std::max(top, l);
  }
  if (level_count != 0 && level_count < top)
    throw std::invalid_argument("level_count smaller than the largest level used");
  level_count_ = level_count == 0 ? top : level_count;
}

KnowledgeBase KnowledgeBase::add_evidence(const Formula& phi) const {
  KnowledgeBase out = *this;
  out.facts_.push_back(phi);
  return out;
}

KnowledgeBase add_evidence(const KnowledgeBase& kb, const Formula& phi) {
  return kb.add_evidence(phi);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Level named by a defaults header, or 0 if the line is not one.
int defaults_header_level(std::string_view line, std::size_t lineno) {
  if (line == "defaults:") return 1;
  constexpr std::string_view prefix = "defaults[";
  if (line.substr(0, prefix.size()) != prefix || line.size() < prefix.size() + 3 ||
      line.substr(line.size() - 2) != "]:")
    return 0;
  const auto digits = line.substr(prefix.size(), line.size() - prefix.size() - 2);
  int level = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), level);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || level < 1)
    throw KbSyntaxError(lineno, prefix.size() + 1, "invalid level in defaults header");
  return level;
}

}  // namespace

KnowledgeBase load_kb(std::string_view text) {
  enum class Section { None, Facts, Defaults };
  Section section = Section::None;
  bool seen_facts = false;
  bool explicit_levels = false;
  int current_level = 0;
  std::set<int> headers;
  std::vector<Formula> facts;
  std::vector<Formula> defaults;
  std::vector<int> levels;

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++lineno;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data());

    if (line == "facts:") {
      if (seen_facts) throw KbSyntaxError(lineno, indent + 1, "duplicate facts section");
      seen_facts = true;
      section = Section::Facts;
      continue;
    }
    if (const int level = defaults_header_level(line, lineno); level != 0) {
      if (line != "defaults:") explicit_levels = true;
      if (!headers.insert(level).second)
        throw KbSyntaxError(lineno, indent + 1,
                            "duplicate header for level " + std::to_string(level));
      section = Section::Defaults;
      current_level = level;
      continue;
    }
    if (section == Section::None)
      throw KbSyntaxError(lineno, indent + 1, "formula outside of a facts/defaults section");

    Formula f;
    try {
      f = parse_formula(line);
    } catch (const ParseError& e) {
      throw KbSyntaxError(lineno, indent + e.column(), e.message());
    }
    if (section == Section::Facts) {
      facts.push_back(std::move(f));
    } else {
      defaults.push_back(std::move(f));
      levels.push_back(current_level);
    }
  }

  if (!headers.empty() && *headers.rbegin() != static_cast<int>(headers.size()))
    throw KbSyntaxError(lineno, 1, "priority levels must be numbered 1..m without gaps");

  if (!explicit_levels) return KnowledgeBase(std::move(facts), std::move(defaults));
  return KnowledgeBase(std::move(facts), std::move(defaults), std::move(levels),
                       static_cast<int>(headers.size()));
}

std::string to_text(const KnowledgeBase& kb) {
  std::ostringstream os;
  os << "facts:\n";
  for (const auto& f : kb.facts()) os << f << '\n';
  if (!kb.has_explicit_levels()) {
    os << "defaults:\n";
    for (const auto& f : kb.defaults()) os << f << '\n';
    return os.str();
  }
  std::set<int> printed;
  int current = 0;
  for (std::size_t i = 0; i < kb.size(); ++i) {
    const int level = kb.levels()[i];
    if (level != current) {
      if (!printed.insert(level).second)
        throw std::invalid_argument("level " + std::to_string(level) +
                                    " is not contiguous in declaration order");
      os << "defaults[" << level << "]:\n";
      current = level;
    }
    os << kb.defaults()[i] << '\n';
  }
  for (int level = 1; level <= kb.level_count(); ++level)
    if (!printed.contains(level)) os << "defaults[" << level << "]:\n";
  return os.str();
}

ValidationReport validate(const KnowledgeBase& kb) {
  ValidationReport r;
  r.facts_satisfiable = sat::is_satisfiable(kb.facts());
  std::vector<Formula> all = kb.facts();
  all.insert(all.end(), kb.defaults().begin(), kb.defaults().end());
  r.all_satisfiable = r.facts_satisfiable && sat::is_satisfiable(all);
  r.defaults = kb.size();
  r.levels = kb.level_count();
  r.explicit_levels = kb.has_explicit_levels();
  r.level_sizes.assign(static_cast<std::size_t>(kb.level_count()), 0);
  for (int l : kb.levels()) ++r.level_sizes[static_cast<std::size_t>(l - 1)];
  return r;
}

}  // namespace epsdiag
