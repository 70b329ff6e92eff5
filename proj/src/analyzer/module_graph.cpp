#include "teletype/analyzer/module_graph.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace teletype::analyzer {

namespace {

using Edges = std::map<std::string, std::set<std::string>>;

// Returns the edges of one cycle, or nullopt if the graph is acyclic.
class CycleFinder {
 public:
  explicit CycleFinder(const Edges& edges) : edges_(edges) {}

  std::optional<std::vector<ImportEdge>> find() {
    for (const auto& [node, targets] : edges_) {
      if (color_[node] == 0) {
        if (auto cycle = visit(node)) return cycle;
      }
    }
    return std::nullopt;
  }

 private:
  std::optional<std::vector<ImportEdge>> visit(const std::string& node) {
    color_[node] = 1;
    path_.push_back(node);
    for (const auto& next : edges_.at(node)) {
      int c = color_[next];
      if (c == 1) {
        std::vector<ImportEdge> cycle;
        auto start = std::find(path_.begin(), path_.end(), next);
        for (auto it = start; it + 1 != path_.end(); ++it) cycle.push_back({*it, *(it + 1)});
        cycle.push_back({node, next});
        return cycle;
      }
      if (c == 0) {
        if (auto cycle = visit(next)) return cycle;
      }
    }
    path_.pop_back();
    color_[node] = 2;
    return std::nullopt;
  }

  const Edges& edges_;
  std::map<std::string, int> color_;
  std::vector<std::string> path_;
};

void walk_expr(const Expr& e, std::set<std::string>& out);

void walk_block(const Block& block, std::set<std::string>& out);

void walk_fn(const FunctionBody& fn, std::set<std::string>& out) {
  if (fn.body) walk_block(*fn.body, out);
}

void walk_expr(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FieldGet>) {
          walk_expr(*node.object, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          walk_expr(*node.callee, out);
          for (const auto& arg : node.args) walk_expr(*arg, out);
        } else if constexpr (std::is_same_v<T, Require>) {
          if (node.module_id) out.insert(*node.module_id);
          if (node.argument) walk_expr(*node.argument, out);
        } else if constexpr (std::is_same_v<T, TableLit>) {
          for (const auto& [name, value] : node.fields) walk_expr(*value, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          walk_expr(*node.lhs, out);
          walk_expr(*node.rhs, out);
        } else if constexpr (std::is_same_v<T, Cast>) {
          walk_expr(*node.value, out);
        } else if constexpr (std::is_same_v<T, FunctionExpr>) {
          walk_fn(node.fn, out);
        }
      },
      e.node);
}

void walk_block(const Block& block, std::set<std::string>& out) {
  for (const auto& stat : block.stats) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, LocalDecl>) {
            if (node.value) walk_expr(*node.value, out);
          } else if constexpr (std::is_same_v<T, LocalFunction>) {
            walk_fn(node.fn, out);
          } else if constexpr (std::is_same_v<T, Assign>) {
            walk_expr(*node.target, out);
            walk_expr(*node.value, out);
          } else if constexpr (std::is_same_v<T, If>) {
            walk_expr(*node.cond, out);
            walk_block(node.then_block, out);
            if (node.else_block) walk_block(*node.else_block, out);
          } else if constexpr (std::is_same_v<T, While>) {
            walk_expr(*node.cond, out);
            walk_block(node.body, out);
          } else if constexpr (std::is_same_v<T, Return>) {
            if (node.value) walk_expr(*node.value, out);
          } else if constexpr (std::is_same_v<T, CallStat>) {
            walk_expr(*node.call, out);
          }
        },
        stat.node);
  }
}

}  // namespace

ModuleGraph::ModuleGraph(const std::map<std::string, std::set<std::string>>& imports) {
  for (const auto& [module, targets] : imports) {
    auto& out = edges_[module];
    for (const auto& target : targets) {
      if (imports.contains(target)) out.insert(target);
    }
  }

  while (auto cycle = CycleFinder(edges_).find()) {
    const ImportEdge worst = *std::max_element(cycle->begin(), cycle->end());
    edges_[worst.importer].erase(worst.importee);
    removed_.insert(worst);
  }

  for (const auto& [module, targets] : edges_) {
    importers_[module];
    for (const auto& target : targets) importers_[target].insert(module);
  }

  std::map<std::string, std::size_t> pending;
  std::set<std::string> ready;
  for (const auto& [module, targets] : edges_) {
    pending[module] = targets.size();
    if (targets.empty()) ready.insert(module);
  }
  while (!ready.empty()) {
    std::string next = *ready.begin();
    ready.erase(ready.begin());
    order_.push_back(next);
    for (const auto& importer : importers_[next]) {
      if (--pending[importer] == 0) ready.insert(importer);
    }
  }
}

bool ModuleGraph::is_removed(const std::string& importer, const std::string& importee) const {
  return removed_.contains(ImportEdge{importer, importee});
}

const std::set<std::string>& ModuleGraph::imports_of(const std::string& id) const {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw std::out_of_range(fmt::format("unknown module '{}'", id));
  return it->second;
}

std::set<std::string> ModuleGraph::dirty_set(const std::string& id) const {
  if (!edges_.contains(id)) throw std::out_of_range(fmt::format("unknown module '{}'", id));
  std::set<std::string> dirty{id};
  std::vector<std::string> stack{id};
  while (!stack.empty()) {
    std::string current = std::move(stack.back());
    stack.pop_back();
    auto it = importers_.find(current);
    if (it == importers_.end()) continue;
    for (const auto& importer : it->second) {
      if (dirty.insert(importer).second) stack.push_back(importer);
    }
  }
  return dirty;
}

std::set<std::string> collect_requires(const Block& chunk) {
  std::set<std::string> out;
  walk_block(chunk, out);
  return out;
}

}  // namespace teletype::analyzer
