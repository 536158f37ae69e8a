#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace css {

__extension__ typedef __int128 int128_t;

/// Exact fixed-point decimal with 18 fractional digits. Used for every stored
/// quantity (property bounds, parameter values, prices, CO2) so that values
/// written as "0.015" or "4.50" never pick up binary floating-point drift.
/// Arithmetic that cannot be represented exactly throws InexactArithmetic.
class Decimal {
 public:
  static constexpr int kFractionDigits = 18;

  constexpr Decimal() = default;
  static Decimal from_int(std::int64_t value);
  static Decimal from_raw(int128_t raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
  }

  /// Parses "[+-]digits[.digits]". Returns nullopt on malformed text or when
  /// more than 18 fractional digits are given.
  static std::optional<Decimal> try_parse(std::string_view text);
  /// As try_parse but throws ParseError.
  static Decimal parse(std::string_view text);

  int128_t raw() const noexcept { return raw_; }

  /// Shortest exact rendering: "12", "0.015", "-4.5".
  std::string to_string() const;

  bool is_integer() const noexcept;
  /// Throws InexactArithmetic when not integral or out of int64 range.
  std::int64_t to_int64() const;

  Decimal floor() const;
  Decimal ceil() const;

  /// value * num / den, exact or throws InexactArithmetic.
  Decimal mul_ratio(std::int64_t num, std::int64_t den) const;
  Decimal mul_int(std::int64_t factor) const { return mul_ratio(factor, 1); }
  /// Halves toward negative infinity at the last representable digit.
  Decimal half_floor() const;

  Decimal operator-() const;
  friend Decimal operator+(Decimal a, Decimal b);
  friend Decimal operator-(Decimal a, Decimal b);
  Decimal& operator+=(Decimal other) { return *this = *this + other; }

  friend bool operator==(Decimal a, Decimal b) noexcept {
    return a.raw_ == b.raw_;
  }
  friend std::strong_ordering operator<=>(Decimal a, Decimal b) noexcept {
    return a.raw_ <=> b.raw_;
  }

  static Decimal one() { return from_int(1); }

 private:
  int128_t raw_ = 0;
};

}  // namespace css
