#include "types.hpp"

#include <unordered_map>

namespace teletype::analyzer::types {

namespace {

TypePtr make(Type::Kind kind) {
  auto t = std::make_shared<Type>();
  t->kind = kind;
  return t;
}

TypePtr seal_impl(const TypePtr& type,
                  std::unordered_map<const TableShape*, std::shared_ptr<TableShape>>& done) {
  switch (type->kind) {
    case Type::Kind::Table: {
      if (auto it = done.find(type->table.get()); it != done.end()) return table(it->second);
      auto shape = std::make_shared<TableShape>();
      shape->sealed = true;
      done.emplace(type->table.get(), shape);
      for (const auto& [name, field] : type->table->fields) {
        shape->fields.emplace(name, seal_impl(field, done));
      }
      return table(shape);
    }
    case Type::Kind::Optional:
      return optional(seal_impl(type->inner, done));
    default:
      return type;
  }
}

}  // namespace

TypePtr number() {
  static const TypePtr t = make(Type::Kind::Number);
  return t;
}

TypePtr string() {
  static const TypePtr t = make(Type::Kind::String);
  return t;
}

TypePtr boolean() {
  static const TypePtr t = make(Type::Kind::Boolean);
  return t;
}

TypePtr nil() {
  static const TypePtr t = make(Type::Kind::Nil);
  return t;
}

TypePtr top() {
  static const TypePtr t = make(Type::Kind::Top);
  return t;
}

TypePtr dynamic() {
  static const TypePtr t = make(Type::Kind::Dynamic);
  return t;
}

TypePtr table(std::shared_ptr<TableShape> shape) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Table;
  t->table = std::move(shape);
  return t;
}

TypePtr function(int params, bool variadic, TypePtr result) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Function;
  t->params = params;
  t->variadic = variadic;
  t->result = result ? std::move(result) : dynamic();
  return t;
}

TypePtr optional(TypePtr inner) {
  switch (inner->kind) {
    case Type::Kind::Nil:
    case Type::Kind::Optional:
    case Type::Kind::Top:
    case Type::Kind::Dynamic:
      return inner;
    default: {
      auto t = std::make_shared<Type>();
      t->kind = Type::Kind::Optional;
      t->inner = std::move(inner);
      return t;
    }
  }
}

bool compatible(const Type& slot, const Type& value) {
  using K = Type::Kind;
  if (slot.is(K::Dynamic) || value.is(K::Dynamic) || slot.is(K::Top)) return true;
  if (value.is(K::Top)) return false;
  if (slot.is(K::Optional)) {
    if (value.is(K::Nil)) return true;
    if (value.is(K::Optional)) return compatible(*slot.inner, *value.inner);
    return compatible(*slot.inner, value);
  }
  if (value.is(K::Optional)) return false;
  if (slot.kind != value.kind) return false;
  if (slot.is(K::Table)) return missing_field(slot, value).empty();
  return true;
}

bool related(const Type& a, const Type& b) { return compatible(a, b) || compatible(b, a); }

std::string missing_field(const Type& slot, const Type& value) {
  if (!slot.is(Type::Kind::Table) || !value.is(Type::Kind::Table)) return {};
  for (const auto& [name, field] : slot.table->fields) {
    if (!value.table->fields.contains(name)) return name;
  }
  return {};
}

TypePtr sealed_copy(const TypePtr& type) {
  std::unordered_map<const TableShape*, std::shared_ptr<TableShape>> done;
  return seal_impl(type, done);
}

std::string to_string(const Type& type) {
  switch (type.kind) {
    case Type::Kind::Number:
      return "number";
    case Type::Kind::String:
      return "string";
    case Type::Kind::Boolean:
      return "boolean";
    case Type::Kind::Nil:
      return "nil";
    case Type::Kind::Table:
      return "table";
    case Type::Kind::Function:
      return "function";
    case Type::Kind::Optional:
      return to_string(*type.inner) + "?";
    case Type::Kind::Top:
      return "unknown";
    case Type::Kind::Dynamic:
      return "any";
  }
  return "any";
}

}  // namespace teletype::analyzer::types
