#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "css/decimal.hpp"

namespace css {

enum class Datatype { Integer, Real, Enum, Boolean };

std::string_view to_string(Datatype type);
std::optional<Datatype> parse_datatype(std::string_view text);
inline bool is_numeric(Datatype type) {
  return type == Datatype::Integer || type == Datatype::Real;
}

/// A value tagged with its datatype. Numbers are exact decimals; integer
/// literals are always integral.
class Literal {
 public:
  static Literal integer(std::int64_t value);
  /// Throws TypeMismatch if the value is not integral.
  static Literal integer(Decimal value);
  static Literal real(Decimal value);
  static Literal symbol(std::string value);
  static Literal boolean(bool value);

  Datatype type() const noexcept { return type_; }
  bool is_numeric() const noexcept { return css::is_numeric(type_); }

  const Decimal& number() const;
  const std::string& symbol() const;
  bool flag() const;

  /// Plain rendering without quoting: "12", "0.015", "steel", "true".
  std::string to_string() const;

  friend bool operator==(const Literal&, const Literal&) = default;

 private:
  Literal(Datatype type, std::variant<Decimal, std::string, bool> value)
      : type_(type), value_(std::move(value)) {}

  Datatype type_;
  std::variant<Decimal, std::string, bool> value_;
};

/// Converts a literal to `target` when that loses nothing: integer widens to
/// real, an integral real narrows to integer. Returns nullopt otherwise.
std::optional<Literal> coerce(const Literal& value, Datatype target);

using ParameterMap = std::map<std::string, Literal>;

}  // namespace css
