#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace css {

/// UTC instant with millisecond resolution. Text form is ISO-8601
/// "YYYY-MM-DDTHH:MM:SS[.mmm]Z".
struct Timestamp {
  std::int64_t millis = 0;  ///< since 1970-01-01T00:00:00Z

  static std::optional<Timestamp> try_parse(std::string_view text);
  /// Throws ParseError.
  static Timestamp parse(std::string_view text);
  std::string to_string() const;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

}  // namespace css
