#include "teletype/error_kind.hpp"

#include <utility>

namespace teletype {

namespace {

constexpr std::array<std::string_view, kErrorKindCount> kTags = {
    "TypeMismatch",
    "SyntaxError",
    "UnknownProperty",
    "OnlyTablesCanHaveMethods",
    "CannotExtendTable",
    "TypesAreUnrelated",
    "CountMismatch",
    "IncorrectGenericParamCount",
    "CodeTooComplex",
    "GenericError",
    "ExtraInformation",
    "CannotCallNonFunction",
    "CannotInferBinaryOperation",
    "DuplicateTypeDefinition",
    "FunctionDoesNotTakeSelf",
    "FunctionExitsWithoutReturning",
    "IllegalRequire",
    "MissingProperties",
    "ModuleHasCyclicDependency",
    "NotATable",
    "OccursCheckFailed",
    "OptionalValueAccess",
    "UnknownPropButFoundLikeProp",
    "UnknownRequire",
    "UnknownSymbol",
    "MissingUnionProperty",
    "NormalizationTooComplex",
    "UnificationTooComplex",
    "Reserved01",
    "Reserved02",
    "Reserved03",
    "Reserved04",
    "Reserved05",
    "Reserved06",
    "Reserved07",
};

constexpr std::array<std::pair<std::string_view, ErrorKind>, 4> kAliases = {{
    {"UnknownPropButGotLikeProp", ErrorKind::UnknownPropButFoundLikeProp},
    {"GenericExtraInformation", ErrorKind::ExtraInformation},
    {"IncorrectGenericParameterCount", ErrorKind::IncorrectGenericParamCount},
    {"FunctionExitsWithoutReturn", ErrorKind::FunctionExitsWithoutReturning},
}};

std::array<ErrorKind, kErrorKindCount> make_all() {
  std::array<ErrorKind, kErrorKindCount> out{};
  for (std::size_t i = 0; i < kErrorKindCount; ++i) {
    out[i] = static_cast<ErrorKind>(i);
  }
  return out;
}

}  // namespace

const std::array<ErrorKind, kErrorKindCount>& all_error_kinds() {
  static const auto kinds = make_all();
  return kinds;
}

std::string_view to_string(ErrorKind kind) { return kTags[index_of(kind)]; }

std::optional<ErrorKind> error_kind_from_string(std::string_view tag) {
  for (std::size_t i = 0; i < kTags.size(); ++i) {
    if (kTags[i] == tag) return static_cast<ErrorKind>(i);
  }
  for (const auto& [alias, kind] : kAliases) {
    if (alias == tag) return kind;
  }
  return std::nullopt;
}

bool is_too_complex(ErrorKind kind) {
  return kind == ErrorKind::CodeTooComplex ||
         kind == ErrorKind::NormalizationTooComplex ||
         kind == ErrorKind::UnificationTooComplex;
}

}  // namespace teletype
