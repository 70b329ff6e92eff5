#pragma once

#include <map>
#include <memory>
#include <string>

namespace teletype::analyzer {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

// Table shapes are shared by reference: aliases of one table see the same
// fields, and unsealed tables grow when new fields are written.
struct TableShape {
  std::map<std::string, TypePtr> fields;
  bool sealed = false;
};

struct Type {
  enum class Kind { Number, String, Boolean, Nil, Table, Function, Optional, Top, Dynamic };

  Kind kind = Kind::Dynamic;
  std::shared_ptr<TableShape> table;  // Table
  int params = 0;                     // Function
  bool variadic = false;              // Function
  TypePtr result;                     // Function
  TypePtr inner;                      // Optional; never Nil, Optional, Top or Dynamic

  bool is(Kind k) const { return kind == k; }
};

namespace types {

TypePtr number();
TypePtr string();
TypePtr boolean();
TypePtr nil();
TypePtr top();
TypePtr dynamic();
TypePtr table(std::shared_ptr<TableShape> shape);
TypePtr function(int params, bool variadic, TypePtr result);
/// Normalizing: optional(nil) = nil, optional(T?) = T?, dynamic and top absorb.
TypePtr optional(TypePtr inner);

/// Whether a value of type `value` may be stored where `slot` is expected.
bool compatible(const Type& slot, const Type& value);
/// Whether either type converts into the other; used for casts.
bool related(const Type& a, const Type& b);
/// First field of `slot` missing from `value` when both are tables.
std::string missing_field(const Type& slot, const Type& value);

/// Deep copy with every reachable table sealed.
TypePtr sealed_copy(const TypePtr& type);

std::string to_string(const Type& type);

}  // namespace types
}  // namespace teletype::analyzer
