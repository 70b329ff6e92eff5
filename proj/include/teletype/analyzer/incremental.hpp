#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teletype/analyzer/checker.hpp"

namespace teletype::analyzer {

struct ProjectAnalysis {
  AnalysisResult visible;
  AnalysisResult background;
};

/// Errors of the too-complex family across one result.
std::size_t too_complex_count(const AnalysisResult& result);

/// Runs the visible and background passes over successive versions of a
/// project, re-checking only modules whose text changed and their transitive
/// importers. Results are identical to a fresh analysis of the same version.
class ProjectAnalyzer {
 public:
  explicit ProjectAnalyzer(AnalysisBudget budget = {});
  ~ProjectAnalyzer();
  ProjectAnalyzer(ProjectAnalyzer&&) noexcept;
  ProjectAnalyzer& operator=(ProjectAnalyzer&&) noexcept;

  ProjectAnalysis analyze(const Project& project);

  /// Modules re-checked by the latest analyze() call.
  const std::set<std::string>& last_checked() const { return last_checked_; }

 private:
  struct Entry;

  AnalysisBudget budget_;
  std::map<std::string, std::unique_ptr<Entry>> cache_;
  std::optional<ModuleGraph> graph_;
  std::set<std::string> data_model_;
  std::set<std::string> globals_;
  std::set<std::string> last_checked_;
};

}  // namespace teletype::analyzer
