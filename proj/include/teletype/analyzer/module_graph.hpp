#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "teletype/analyzer/ast.hpp"

namespace teletype::analyzer {

struct ImportEdge {
  std::string importer;
  std::string importee;

  auto operator<=>(const ImportEdge&) const = default;
};

/// Import graph over a project with cycles broken deterministically: while a
/// cycle exists, the lexicographically greatest (importer, importee) edge on
/// the first cycle found by a sorted depth-first search is dropped.
class ModuleGraph {
 public:
  ModuleGraph() = default;

  /// `imports` maps every module to the set of project modules it requires.
  /// Targets that are not keys of the map are ignored.
  explicit ModuleGraph(const std::map<std::string, std::set<std::string>>& imports);

  const std::set<ImportEdge>& removed_edges() const { return removed_; }
  bool is_removed(const std::string& importer, const std::string& importee) const;

  /// Modules ordered so that every importee precedes its importers; ties are
  /// broken by module id.
  const std::vector<std::string>& topo_order() const { return order_; }

  /// Direct imports that survived cycle breaking.
  const std::set<std::string>& imports_of(const std::string& id) const;
  bool contains(const std::string& id) const { return edges_.contains(id); }

  /// {id} plus every module that transitively imports it in the acyclic
  /// graph. Throws std::out_of_range for an unknown module.
  std::set<std::string> dirty_set(const std::string& id) const;

 private:
  std::map<std::string, std::set<std::string>> edges_;     // importer -> importees
  std::map<std::string, std::set<std::string>> importers_; // importee -> importers
  std::set<ImportEdge> removed_;
  std::vector<std::string> order_;
};

/// String-literal `require` targets anywhere in the chunk, including ones that
/// do not name a project module.
std::set<std::string> collect_requires(const Block& chunk);

}  // namespace teletype::analyzer
