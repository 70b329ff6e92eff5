#pragma once

#include <set>
#include <string>
#include <string_view>

namespace teletype {

struct PrivacyVerdict {
  bool pass = true;
  std::string offender;  // first forbidden string found, empty on pass
};

/// Strings shorter than this are too common to indicate a leak.
inline constexpr std::size_t kMinForbiddenLength = 4;

/// Passes iff no forbidden string of at least kMinForbiddenLength bytes occurs
/// anywhere in `bytes`.
PrivacyVerdict audit_privacy(std::string_view bytes, const std::set<std::string>& forbidden);

/// True iff every JSON string token in `line` is a fixed field name, a fixed
/// enum tag, an error-kind tag, "corrupt", or a run of digits.
bool uses_fixed_vocabulary(std::string_view line);

/// The full set of fixed strings that may appear in serialized records.
const std::set<std::string>& wire_vocabulary();

}  // namespace teletype
