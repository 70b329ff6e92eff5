#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace teletype {

// Closed vocabulary of analysis error labels. The order is the canonical
// order used on the wire and in every report.
enum class ErrorKind : std::uint8_t {
  TypeMismatch,
  SyntaxError,
  UnknownProperty,
  OnlyTablesCanHaveMethods,
  CannotExtendTable,
  TypesAreUnrelated,
  CountMismatch,
  IncorrectGenericParamCount,
  CodeTooComplex,
  GenericError,
  ExtraInformation,
  CannotCallNonFunction,
  CannotInferBinaryOperation,
  DuplicateTypeDefinition,
  FunctionDoesNotTakeSelf,
  FunctionExitsWithoutReturning,
  IllegalRequire,
  MissingProperties,
  ModuleHasCyclicDependency,
  NotATable,
  OccursCheckFailed,
  OptionalValueAccess,
  UnknownPropButFoundLikeProp,
  UnknownRequire,
  UnknownSymbol,
  MissingUnionProperty,
  NormalizationTooComplex,
  UnificationTooComplex,
  Reserved01,
  Reserved02,
  Reserved03,
  Reserved04,
  Reserved05,
  Reserved06,
  Reserved07,
};

inline constexpr std::size_t kErrorKindCount = 35;

/// Every kind in canonical order.
const std::array<ErrorKind, kErrorKindCount>& all_error_kinds();

std::string_view to_string(ErrorKind kind);

/// Accepts canonical tags and the few alternate spellings found in published
/// tables (e.g. "GenericExtraInformation"); always yields the canonical kind.
std::optional<ErrorKind> error_kind_from_string(std::string_view tag);

/// CodeTooComplex, NormalizationTooComplex and UnificationTooComplex.
bool is_too_complex(ErrorKind kind);

constexpr std::size_t index_of(ErrorKind kind) {
  return static_cast<std::size_t>(kind);
}

}  // namespace teletype
