#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace teletype::analyzer {

struct SourceSpan {
  int first_line = 1;
  int last_line = 1;
};

struct Expr;
struct Stat;
using ExprPtr = std::unique_ptr<Expr>;

struct Block {
  std::vector<Stat> stats;
};

struct FunctionBody {
  std::vector<std::string> params;
  std::unique_ptr<Block> body;
};

struct NilLit {};
struct BoolLit {
  bool value = false;
};
struct NumberLit {
  double value = 0;
};
struct StringLit {
  std::string value;
};
struct NameRef {
  std::string name;
};
struct FieldGet {
  ExprPtr object;
  std::string field;
};
struct Call {
  ExprPtr callee;
  std::vector<ExprPtr> args;
};
struct Require {
  // Empty when the argument is not a string literal.
  std::optional<std::string> module_id;
  ExprPtr argument;
};
struct TableLit {
  // Positional entries get an empty name; they are not addressable by `.`.
  std::vector<std::pair<std::string, ExprPtr>> fields;
};
struct Binary {
  enum class Op { Add, Sub, Eq, Ne };
  Op op = Op::Add;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Cast {
  ExprPtr value;
  std::string type_name;
};
struct FunctionExpr {
  FunctionBody fn;
};

struct Expr {
  SourceSpan span;
  std::variant<NilLit, BoolLit, NumberLit, StringLit, NameRef, FieldGet, Call, Require,
               TableLit, Binary, Cast, FunctionExpr>
      node;
};

struct LocalDecl {
  std::string name;
  ExprPtr value;  // null for `local x`
};
struct LocalFunction {
  std::string name;
  FunctionBody fn;
};
struct Assign {
  ExprPtr target;  // NameRef or FieldGet
  ExprPtr value;
};
struct If {
  ExprPtr cond;
  Block then_block;
  std::optional<Block> else_block;  // `elseif` chains nest here
};
struct While {
  ExprPtr cond;
  Block body;
};
struct Return {
  ExprPtr value;  // may be null
};
struct CallStat {
  ExprPtr call;
};

struct Stat {
  SourceSpan span;
  std::variant<LocalDecl, LocalFunction, Assign, If, While, Return, CallStat> node;
};

}  // namespace teletype::analyzer
