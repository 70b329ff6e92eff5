#include "teletype/analyzer/checker.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

#include "types.hpp"

namespace teletype::analyzer {

namespace {

struct BudgetExceeded {};

constexpr std::string_view kDataModelRoot = "game";

TypePtr builtin(const std::string& name) {
  static const std::map<std::string, TypePtr> kBuiltins = {
      {"print", types::function(0, true, types::nil())},
      {"wait", types::function(0, true, types::number())},
      {"tostring", types::function(1, false, types::string())},
      {"tonumber", types::function(1, false, types::optional(types::number()))},
  };
  auto it = kBuiltins.find(name);
  return it == kBuiltins.end() ? nullptr : it->second;
}

std::string describe_object(const Expr& e) {
  if (const auto* name = std::get_if<NameRef>(&e.node)) return name->name;
  if (const auto* field = std::get_if<FieldGet>(&e.node)) return field->field;
  return "table";
}

bool has_value_return(const Block& block) {
  for (const auto& stat : block.stats) {
    if (const auto* ret = std::get_if<Return>(&stat.node)) {
      if (ret->value) return true;
    } else if (const auto* branch = std::get_if<If>(&stat.node)) {
      if (has_value_return(branch->then_block)) return true;
      if (branch->else_block && has_value_return(*branch->else_block)) return true;
    } else if (const auto* loop = std::get_if<While>(&stat.node)) {
      if (has_value_return(loop->body)) return true;
    }
  }
  return false;
}

bool always_returns(const Block& block) {
  if (block.stats.empty()) return false;
  const auto& last = block.stats.back();
  if (std::holds_alternative<Return>(last.node)) return true;
  if (const auto* branch = std::get_if<If>(&last.node)) {
    return branch->else_block && always_returns(branch->then_block) &&
           always_returns(*branch->else_block);
  }
  return false;
}

class Checker {
 public:
  Checker(const Project& project, const ModuleGraph& graph, std::string module_id,
          DataModelTyping data_model, const ImportResolver& resolve, AnalysisBudget budget)
      : project_(project),
        graph_(graph),
        module_id_(std::move(module_id)),
        data_model_(data_model),
        resolve_(resolve),
        budget_(budget) {}

  ModuleOutcome run(const Block& chunk) {
    ModuleOutcome outcome;
    exported_ = types::dynamic();
    try {
      scopes_.emplace_back();
      check_block_in_scope(chunk);
      outcome.errors = std::move(errors_);
      std::sort(outcome.errors.begin(), outcome.errors.end(), [](const auto& a, const auto& b) {
        return std::tie(a.start_line, a.end_line, a.kind, a.message) <
               std::tie(b.start_line, b.end_line, b.kind, b.message);
      });
      outcome.exported = types::sealed_copy(exported_);
    } catch (const BudgetExceeded&) {
      outcome.errors.clear();
      AnalysisError error;
      error.kind = ErrorKind::CodeTooComplex;
      error.module_id = module_id_;
      error.start_line = current_span_.first_line;
      error.end_line = current_span_.last_line;
      error.message = "Code is too complex to typecheck! Consider simplifying the code around this area";
      outcome.errors.push_back(std::move(error));
      outcome.exported = types::dynamic();
    }
    outcome.work = work_;
    return outcome;
  }

 private:
  void tick() {
    if (++work_ > budget_.max_steps) throw BudgetExceeded{};
  }

  void report(ErrorKind kind, SourceSpan span, std::string message, bool data_model = false) {
    AnalysisError error;
    error.kind = kind;
    error.module_id = module_id_;
    error.start_line = span.first_line;
    error.end_line = span.last_line;
    error.message = std::move(message);
    error.data_model_rooted = data_model;
    errors_.push_back(std::move(error));
  }

  void report_top_use(SourceSpan span, std::string_view what) {
    report(ErrorKind::TypeMismatch, span,
           fmt::format("Cannot {} a value of type 'unknown'; cast it first", what), true);
  }

  // --- scopes -------------------------------------------------------------

  TypePtr* find_slot(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (auto found = it->find(name); found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void declare(const std::string& name, TypePtr type) { scopes_.back()[name] = std::move(type); }

  void check_block_in_scope(const Block& block) {
    for (const auto& stat : block.stats) check_stat(stat);
  }

  void check_nested_block(const Block& block) {
    scopes_.emplace_back();
    check_block_in_scope(block);
    scopes_.pop_back();
  }

  // --- statements ---------------------------------------------------------

  void check_stat(const Stat& stat) {
    current_span_ = stat.span;
    tick();
    std::visit([&](const auto& node) { check_node(node, stat.span); }, stat.node);
  }

  void check_node(const LocalDecl& node, SourceSpan) {
    TypePtr type = node.value ? check_expr(*node.value) : types::nil();
    declare(node.name, std::move(type));
  }

  void check_node(const LocalFunction& node, SourceSpan span) {
    declare(node.name, types::function(static_cast<int>(node.fn.params.size()), false, nullptr));
    check_function(node.fn, span);
  }

  void check_node(const Assign& node, SourceSpan) {
    if (const auto* name = std::get_if<NameRef>(&node.target->node)) {
      tick();
      TypePtr value = check_expr(*node.value);
      if (TypePtr* slot = find_slot(name->name)) {
        assign_slot(*slot, value, true, node.value->span);
      } else if (name->name != kDataModelRoot && !builtin(name->name) &&
                 !project_.globals.contains(name->name)) {
        scopes_.front()[name->name] = value;
      }
      return;
    }
    const auto& field = std::get<FieldGet>(node.target->node);
    tick();
    TypePtr object = check_expr(*field.object);
    TypePtr value = check_expr(*node.value);
    write_field(object, field, node.target->span, value, node.value->span);
  }

  void check_node(const If& node, SourceSpan) {
    check_expr(*node.cond);
    check_nested_block(node.then_block);
    if (node.else_block) check_nested_block(*node.else_block);
  }

  void check_node(const While& node, SourceSpan) {
    check_expr(*node.cond);
    check_nested_block(node.body);
  }

  void check_node(const Return& node, SourceSpan) {
    TypePtr value = node.value ? check_expr(*node.value) : types::nil();
    if (function_depth_ == 0) exported_ = std::move(value);
  }

  void check_node(const CallStat& node, SourceSpan) { check_expr(*node.call); }

  void assign_slot(TypePtr& slot, const TypePtr& value, bool can_widen, SourceSpan span) {
    using K = Type::Kind;
    if (value->is(K::Top) && !slot->is(K::Top) && !slot->is(K::Dynamic)) {
      report(ErrorKind::TypeMismatch, span,
             fmt::format("Type 'unknown' could not be converted into '{}'", types::to_string(*slot)),
             true);
      return;
    }
    if (slot->is(K::Nil)) {
      if (can_widen) {
        if (!value->is(K::Nil)) slot = types::optional(value);
      } else if (!value->is(K::Nil) && !value->is(K::Dynamic)) {
        report(ErrorKind::TypeMismatch, span,
               fmt::format("Type '{}' could not be converted into 'nil'", types::to_string(*value)));
      }
      return;
    }
    if (value->is(K::Nil)) {
      if (slot->is(K::Optional) || slot->is(K::Dynamic) || slot->is(K::Top)) return;
      if (can_widen) {
        slot = types::optional(slot);
      } else {
        report(ErrorKind::TypeMismatch, span,
               fmt::format("Type 'nil' could not be converted into '{}'", types::to_string(*slot)));
      }
      return;
    }
    if (types::compatible(*slot, *value)) return;
    if (auto missing = types::missing_field(*slot, *value); !missing.empty()) {
      report(ErrorKind::MissingProperties, span,
             fmt::format("Table type is not compatible with the declared table because it is "
                         "missing field '{}'",
                         missing));
      return;
    }
    report(ErrorKind::TypeMismatch, span,
           fmt::format("Type '{}' could not be converted into '{}'", types::to_string(*value),
                       types::to_string(*slot)));
  }

  void write_field(const TypePtr& object, const FieldGet& field, SourceSpan target_span,
                   const TypePtr& value, SourceSpan value_span) {
    using K = Type::Kind;
    switch (object->kind) {
      case K::Dynamic:
        return;
      case K::Top:
        report_top_use(target_span, "assign a property of");
        return;
      case K::Optional:
        report(ErrorKind::OptionalValueAccess, target_span,
               fmt::format("Value of type '{}' could be nil", types::to_string(*object)));
        write_field(object->inner, field, target_span, value, value_span);
        return;
      case K::Table: {
        auto& fields = object->table->fields;
        auto it = fields.find(field.field);
        if (it != fields.end()) {
          assign_slot(it->second, value, !object->table->sealed, value_span);
        } else if (object->table->sealed) {
          report(ErrorKind::CannotExtendTable, target_span,
                 fmt::format("Cannot add property '{}' to table '{}'", field.field,
                             describe_object(*field.object)));
        } else {
          fields.emplace(field.field, value);
        }
        return;
      }
      default:
        report(ErrorKind::NotATable, target_span,
               fmt::format("Expected type table, got '{}' instead", types::to_string(*object)));
        return;
    }
  }

  TypePtr check_function(const FunctionBody& fn, SourceSpan span) {
    scopes_.emplace_back();
    for (const auto& param : fn.params) declare(param, types::dynamic());
    ++function_depth_;
    check_block_in_scope(*fn.body);
    --function_depth_;
    scopes_.pop_back();
    if (has_value_return(*fn.body) && !always_returns(*fn.body)) {
      report(ErrorKind::FunctionExitsWithoutReturning, span,
             "Not all codepaths in this function return a value");
    }
    return types::function(static_cast<int>(fn.params.size()), false, nullptr);
  }

  // --- expressions --------------------------------------------------------

  TypePtr check_expr(const Expr& expr) {
    tick();
    return std::visit([&](const auto& node) { return eval(node, expr.span); }, expr.node);
  }

  TypePtr eval(const NilLit&, SourceSpan) { return types::nil(); }
  TypePtr eval(const BoolLit&, SourceSpan) { return types::boolean(); }
  TypePtr eval(const NumberLit&, SourceSpan) { return types::number(); }
  TypePtr eval(const StringLit&, SourceSpan) { return types::string(); }

  TypePtr eval(const NameRef& node, SourceSpan span) {
    if (TypePtr* slot = find_slot(node.name)) return *slot;
    if (node.name == kDataModelRoot) {
      return data_model_ == DataModelTyping::Top ? types::top() : types::dynamic();
    }
    if (TypePtr b = builtin(node.name)) return b;
    if (project_.globals.contains(node.name)) return types::dynamic();
    report(ErrorKind::UnknownSymbol, span, fmt::format("Unknown global '{}'", node.name));
    return types::dynamic();
  }

  TypePtr eval(const FieldGet& node, SourceSpan span) {
    return read_field(check_expr(*node.object), node, span);
  }

  TypePtr read_field(const TypePtr& object, const FieldGet& node, SourceSpan span) {
    using K = Type::Kind;
    switch (object->kind) {
      case K::Dynamic:
        return types::dynamic();
      case K::Top:
        report_top_use(span, fmt::format("access property '{}' of", node.field));
        return types::dynamic();
      case K::Optional:
        report(ErrorKind::OptionalValueAccess, span,
               fmt::format("Value of type '{}' could be nil", types::to_string(*object)));
        return read_field(object->inner, node, span);
      case K::Table: {
        const auto& fields = object->table->fields;
        if (auto it = fields.find(node.field); it != fields.end()) return it->second;
        report(ErrorKind::UnknownProperty, span,
               fmt::format("Key '{}' not found in table '{}'", node.field,
                           describe_object(*node.object)));
        return types::dynamic();
      }
      default:
        report(ErrorKind::NotATable, span,
               fmt::format("Expected type table, got '{}' instead", types::to_string(*object)));
        return types::dynamic();
    }
  }

  TypePtr eval(const Call& node, SourceSpan span) {
    tick();
    TypePtr callee = check_expr(*node.callee);
    for (const auto& arg : node.args) check_expr(*arg);
    return apply_call(callee, node, span);
  }

  TypePtr apply_call(const TypePtr& callee, const Call& node, SourceSpan span) {
    using K = Type::Kind;
    switch (callee->kind) {
      case K::Dynamic:
        return types::dynamic();
      case K::Top:
        report_top_use(span, "call");
        return types::dynamic();
      case K::Optional:
        report(ErrorKind::OptionalValueAccess, span,
               fmt::format("Value of type '{}' could be nil", types::to_string(*callee)));
        return apply_call(callee->inner, node, span);
      case K::Function: {
        const int given = static_cast<int>(node.args.size());
        if (!callee->variadic && given != callee->params) {
          report(ErrorKind::CountMismatch, span,
                 fmt::format("Argument count mismatch. Function expects {} argument{}, but {} {} "
                             "specified",
                             callee->params, callee->params == 1 ? "" : "s", given,
                             given == 1 ? "is" : "are"));
        }
        return callee->result;
      }
      default:
        report(ErrorKind::CannotCallNonFunction, span,
               fmt::format("Cannot call non-function {}", types::to_string(*callee)));
        return types::dynamic();
    }
  }

  TypePtr eval(const Require& node, SourceSpan span) {
    if (node.argument) check_expr(*node.argument);
    if (!node.module_id) {
      report(ErrorKind::IllegalRequire, span,
             "Unknown require: the argument must be a string literal naming a module");
      return types::dynamic();
    }
    const std::string& target = *node.module_id;
    if (!project_.contains(target)) {
      report(ErrorKind::UnknownRequire, span,
             fmt::format("Unknown require: unable to resolve module '{}'", target));
      return types::dynamic();
    }
    if (graph_.is_removed(module_id_, target)) {
      if (cyclic_reported_.insert(target).second) {
        report(ErrorKind::ModuleHasCyclicDependency, span,
               fmt::format("Cyclic module dependency: '{}' -> '{}'", module_id_, target));
      }
      return types::dynamic();
    }
    TypePtr exported = resolve_ ? resolve_(target) : nullptr;
    return exported ? exported : types::dynamic();
  }

  TypePtr eval(const TableLit& node, SourceSpan) {
    auto shape = std::make_shared<TableShape>();
    for (const auto& [name, value] : node.fields) {
      TypePtr type = check_expr(*value);
      if (!name.empty()) shape->fields[name] = std::move(type);
    }
    return types::table(std::move(shape));
  }

  void check_arith_operand(const TypePtr& operand, const Expr& expr, Binary::Op op) {
    using K = Type::Kind;
    const char* symbol = op == Binary::Op::Add ? "+" : "-";
    switch (operand->kind) {
      case K::Number:
      case K::Dynamic:
        return;
      case K::Top:
        report_top_use(expr.span, fmt::format("use '{}' on", symbol));
        return;
      case K::Nil:
      case K::Optional:
        report(ErrorKind::TypeMismatch, expr.span, "Type 'nil' could not be converted into 'number'");
        return;
      case K::Table:
      case K::Function:
        report(ErrorKind::CannotInferBinaryOperation, expr.span,
               fmt::format("Unknown type used in {} operation; consider adding a type annotation",
                           symbol));
        return;
      default:
        report(ErrorKind::TypeMismatch, expr.span,
               fmt::format("Type '{}' could not be converted into 'number'",
                           types::to_string(*operand)));
        return;
    }
  }

  TypePtr eval(const Binary& node, SourceSpan) {
    tick();
    TypePtr lhs = check_expr(*node.lhs);
    TypePtr rhs = check_expr(*node.rhs);
    if (node.op == Binary::Op::Eq || node.op == Binary::Op::Ne) return types::boolean();
    check_arith_operand(lhs, *node.lhs, node.op);
    check_arith_operand(rhs, *node.rhs, node.op);
    return types::number();
  }

  TypePtr eval(const Cast& node, SourceSpan span) {
    tick();
    TypePtr value = check_expr(*node.value);
    TypePtr target;
    if (node.type_name == "any") {
      target = types::dynamic();
    } else if (node.type_name == "number") {
      target = types::number();
    } else if (node.type_name == "string") {
      target = types::string();
    } else if (node.type_name == "boolean") {
      target = types::boolean();
    } else {
      report(ErrorKind::UnknownSymbol, span, fmt::format("Unknown type '{}'", node.type_name));
      return types::dynamic();
    }
    using K = Type::Kind;
    if (!value->is(K::Dynamic) && !value->is(K::Top) && !types::related(*target, *value)) {
      report(ErrorKind::TypesAreUnrelated, span,
             fmt::format("Cannot cast '{}' into '{}' because the types are unrelated",
                         types::to_string(*value), types::to_string(*target)));
    }
    return target;
  }

  TypePtr eval(const FunctionExpr& node, SourceSpan span) { return check_function(node.fn, span); }

  const Project& project_;
  const ModuleGraph& graph_;
  std::string module_id_;
  DataModelTyping data_model_;
  const ImportResolver& resolve_;
  AnalysisBudget budget_;

  std::vector<std::map<std::string, TypePtr>> scopes_;
  std::vector<AnalysisError> errors_;
  std::set<std::string> cyclic_reported_;
  TypePtr exported_;
  SourceSpan current_span_;
  std::size_t work_ = 0;
  int function_depth_ = 0;
};

}  // namespace

bool mode_reports(Mode mode, ErrorKind kind) {
  switch (mode) {
    case Mode::NoCheck:
      return kind == ErrorKind::SyntaxError;
    case Mode::NonStrict:
      switch (kind) {
        case ErrorKind::SyntaxError:
        case ErrorKind::CodeTooComplex:
        case ErrorKind::UnknownSymbol:
        case ErrorKind::UnknownProperty:
        case ErrorKind::UnknownRequire:
        case ErrorKind::CountMismatch:
        case ErrorKind::CannotCallNonFunction:
        case ErrorKind::NotATable:
          return true;
        default:
          return false;
      }
    case Mode::Strict:
      return true;
  }
  return false;
}

ModuleOutcome check_parsed_module(const Project& project, const ModuleGraph& graph,
                                  const std::string& module_id, const ParseResult& parsed,
                                  Mode mode, DataModelTyping data_model,
                                  const ImportResolver& resolve, AnalysisBudget budget) {
  if (budget.max_steps < 1) throw std::invalid_argument("analysis budget must be at least 1");
  if (!parsed.ok()) {
    ModuleOutcome outcome;
    outcome.errors = parsed.errors;
    for (auto& error : outcome.errors) error.module_id = module_id;
    outcome.exported = types::dynamic();
    return outcome;
  }
  if (mode == Mode::NoCheck) return ModuleOutcome{{}, types::dynamic(), 0};

  Checker checker(project, graph, module_id, data_model, resolve, budget);
  ModuleOutcome outcome = checker.run(parsed.ast);
  std::erase_if(outcome.errors, [&](const AnalysisError& e) { return !mode_reports(mode, e.kind); });
  return outcome;
}

}  // namespace teletype::analyzer
