#include "teletype/analyzer/incremental.hpp"

#include <algorithm>
#include <stdexcept>

namespace teletype::analyzer {

struct ProjectAnalyzer::Entry {
  std::vector<std::string> lines;
  ParseResult parsed;
  std::set<std::string> requires_;
  ModuleOutcome visible;
  ModuleOutcome background;
};

namespace {

struct Parsed {
  ParseResult parsed;
  std::set<std::string> requires_;
};

Parsed parse_module(const ModuleSource& source) {
  Parsed out{parse(source.lines, source.id), {}};
  out.requires_ = collect_requires(out.parsed.ast);
  return out;
}

DataModelTyping visible_typing(Mode mode) {
  return mode == Mode::Strict ? DataModelTyping::Top : DataModelTyping::Dynamic;
}

// Export cache lookups for the resolver of one pass.
ImportResolver resolver_for(const std::map<std::string, TypeHandle>& exports) {
  return [&exports](const std::string& id) -> TypeHandle {
    auto it = exports.find(id);
    return it == exports.end() ? nullptr : it->second;
  };
}

}  // namespace

std::size_t too_complex_count(const AnalysisResult& result) {
  std::size_t n = 0;
  for (const auto& [module, errors] : result) {
    n += static_cast<std::size_t>(std::count_if(errors.begin(), errors.end(),
                                                [](const auto& e) { return is_too_complex(e.kind); }));
  }
  return n;
}

ProjectAnalyzer::ProjectAnalyzer(AnalysisBudget budget) : budget_(budget) {}
ProjectAnalyzer::~ProjectAnalyzer() = default;
ProjectAnalyzer::ProjectAnalyzer(ProjectAnalyzer&&) noexcept = default;
ProjectAnalyzer& ProjectAnalyzer::operator=(ProjectAnalyzer&&) noexcept = default;

ProjectAnalysis ProjectAnalyzer::analyze(const Project& project) {
  bool full = !graph_ || project.data_model != data_model_ || project.globals != globals_ ||
              project.modules.size() != cache_.size();
  if (!full) {
    for (const auto& [id, source] : project.modules) {
      if (!cache_.contains(id)) {
        full = true;
        break;
      }
    }
  }

  std::set<std::string> changed;
  if (full) {
    cache_.clear();
    for (const auto& [id, source] : project.modules) changed.insert(id);
  } else {
    for (const auto& [id, source] : project.modules) {
      if (cache_.at(id)->lines != source.lines) changed.insert(id);
    }
  }
  for (const auto& id : changed) {
    auto entry = std::make_unique<Entry>();
    const auto& source = project.modules.at(id);
    entry->lines = source.lines;
    Parsed p = parse_module(source);
    entry->parsed = std::move(p.parsed);
    entry->requires_ = std::move(p.requires_);
    cache_[id] = std::move(entry);
  }

  std::map<std::string, std::set<std::string>> imports;
  for (const auto& [id, entry] : cache_) imports[id] = entry->requires_;
  ModuleGraph graph(imports);

  std::set<std::string> dirty;
  if (full || graph.removed_edges() != graph_->removed_edges()) {
    for (const auto& [id, entry] : cache_) dirty.insert(id);
  } else {
    for (const auto& id : changed) {
      dirty.merge(graph.dirty_set(id));
      if (graph_->contains(id)) dirty.merge(graph_->dirty_set(id));
    }
  }

  std::map<std::string, TypeHandle> visible_exports;
  std::map<std::string, TypeHandle> background_exports;
  const ImportResolver visible_resolve = resolver_for(visible_exports);
  const ImportResolver background_resolve = resolver_for(background_exports);
  for (const auto& id : graph.topo_order()) {
    Entry& entry = *cache_.at(id);
    if (dirty.contains(id)) {
      const Mode mode = pragma_mode(entry.lines);
      entry.visible = check_parsed_module(project, graph, id, entry.parsed, mode,
                                          visible_typing(mode), visible_resolve, budget_);
      entry.background = check_parsed_module(project, graph, id, entry.parsed, Mode::Strict,
                                             DataModelTyping::Dynamic, background_resolve, budget_);
    }
    visible_exports[id] = entry.visible.exported;
    background_exports[id] = entry.background.exported;
  }

  graph_ = std::move(graph);
  data_model_ = project.data_model;
  globals_ = project.globals;
  last_checked_ = std::move(dirty);

  ProjectAnalysis out;
  for (const auto& [id, entry] : cache_) {
    out.visible[id] = entry->visible.errors;
    out.background[id] = entry->background.errors;
  }
  return out;
}

namespace {

struct FreshPass {
  std::map<std::string, Parsed> parsed;
  ModuleGraph graph;
};

FreshPass prepare(const Project& project) {
  FreshPass pass;
  std::map<std::string, std::set<std::string>> imports;
  for (const auto& [id, source] : project.modules) {
    Parsed p = parse_module(source);
    imports[id] = p.requires_;
    pass.parsed.emplace(id, std::move(p));
  }
  pass.graph = ModuleGraph(imports);
  return pass;
}

// Runs one pass over every module and returns the exports.
std::map<std::string, TypeHandle> run_pass(const Project& project, const FreshPass& pass,
                                           bool background, AnalysisBudget budget,
                                           AnalysisResult* errors) {
  std::map<std::string, TypeHandle> exports;
  const ImportResolver resolve = resolver_for(exports);
  for (const auto& id : pass.graph.topo_order()) {
    const Mode mode = background ? Mode::Strict : project.module(id).mode();
    const DataModelTyping typing = background ? DataModelTyping::Dynamic : visible_typing(mode);
    ModuleOutcome outcome = check_parsed_module(project, pass.graph, id, pass.parsed.at(id).parsed,
                                                mode, typing, resolve, budget);
    exports[id] = outcome.exported;
    if (errors) (*errors)[id] = std::move(outcome.errors);
  }
  return exports;
}

}  // namespace

AnalysisResult visible_check(const Project& project, AnalysisBudget budget) {
  AnalysisResult result;
  run_pass(project, prepare(project), false, budget, &result);
  return result;
}

AnalysisResult background_check(const Project& project, AnalysisBudget budget) {
  AnalysisResult result;
  run_pass(project, prepare(project), true, budget, &result);
  return result;
}

std::vector<AnalysisError> check_module(const Project& project, const std::string& module_id,
                                        Mode mode, AnalysisBudget budget) {
  if (!project.contains(module_id)) {
    throw std::out_of_range("unknown module '" + module_id + "'");
  }
  FreshPass pass = prepare(project);
  const auto exports = run_pass(project, pass, false, budget, nullptr);
  return check_parsed_module(project, pass.graph, module_id, pass.parsed.at(module_id).parsed, mode,
                             visible_typing(mode), resolver_for(exports), budget)
      .errors;
}

}  // namespace teletype::analyzer
