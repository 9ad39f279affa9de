#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "epsdiag/formula.hpp"
#include "epsdiag/knowledge_base.hpp"

namespace testsupport {

inline std::string data_path(const std::string& name) {
  return std::string(EPSDIAG_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline epsdiag::KnowledgeBase example_kb() {
  return epsdiag::load_kb(slurp(data_path("diagnosis_example.kb")));
}

inline epsdiag::Formula f(const std::string& text) { return epsdiag::parse_formula(text); }

/// Column order of the published entailment table.
inline constexpr int kTableColumns[] = {1, 6, 3, 2, 8, 7, 5, 4};

}  // namespace testsupport
