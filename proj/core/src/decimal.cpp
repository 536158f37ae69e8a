#include "css/decimal.hpp"

#include <algorithm>
#include <limits>

#include "css/error.hpp"

namespace css {
namespace {

constexpr int128_t pow10(int n) {
  int128_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

constexpr int128_t kScale = pow10(Decimal::kFractionDigits);

[[noreturn]] void inexact(const std::string& what) {
  throw Error(ErrorCode::InexactArithmetic, "decimal " + what);
}

int128_t checked_add(int128_t a, int128_t b) {
  int128_t out;
  if (__builtin_add_overflow(a, b, &out)) inexact("overflow in addition");
  return out;
}

int128_t checked_mul(int128_t a, int128_t b) {
  int128_t out;
  if (__builtin_mul_overflow(a, b, &out)) inexact("overflow in multiplication");
  return out;
}

// Floor division for signed operands.
int128_t floor_div(int128_t a, int128_t b) {
  int128_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Decimal Decimal::from_int(std::int64_t value) {
  return from_raw(static_cast<int128_t>(value) * kScale);
}

std::optional<Decimal> Decimal::try_parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    ++i;
  }
  int128_t integral = 0;
  int128_t fraction = 0;
  int fraction_digits = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    any_digit = true;
    if (seen_point) {
      if (fraction_digits == kFractionDigits) return std::nullopt;
      fraction = fraction * 10 + (c - '0');
      ++fraction_digits;
    } else {
      if (integral > std::numeric_limits<int128_t>::max() / 100) return std::nullopt;
      integral = integral * 10 + (c - '0');
    }
  }
  if (!any_digit) return std::nullopt;
  int128_t raw;
  if (__builtin_mul_overflow(integral, kScale, &raw)) return std::nullopt;
  raw += fraction * pow10(kFractionDigits - fraction_digits);
  return from_raw(negative ? -raw : raw);
}

Decimal Decimal::parse(std::string_view text) {
  auto value = try_parse(text);
  if (!value) {
    throw ParseError(0, "not a decimal number: '" + std::string(text) + "'");
  }
  return *value;
}

std::string Decimal::to_string() const {
  int128_t v = raw_;
  bool negative = v < 0;
  // raw_ is never the int128 minimum in practice; guard anyway.
  if (negative) v = -v;
  int128_t integral = v / kScale;
  int128_t fraction = v % kScale;
  std::string digits;
  do {
    digits.push_back(static_cast<char>('0' + static_cast<int>(integral % 10)));
    integral /= 10;
  } while (integral != 0);
  std::reverse(digits.begin(), digits.end());
  if (fraction != 0) {
    std::string frac(kFractionDigits, '0');
    for (int i = kFractionDigits - 1; i >= 0; --i) {
      frac[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(fraction % 10));
      fraction /= 10;
    }
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    digits += "." + frac;
  }
  return negative ? "-" + digits : digits;
}

bool Decimal::is_integer() const noexcept { return raw_ % kScale == 0; }

std::int64_t Decimal::to_int64() const {
  if (!is_integer()) inexact("value " + to_string() + " is not integral");
  int128_t v = raw_ / kScale;
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    inexact("value out of 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

Decimal Decimal::floor() const { return from_raw(floor_div(raw_, kScale) * kScale); }

Decimal Decimal::ceil() const { return from_raw(-floor_div(-raw_, kScale) * kScale); }

Decimal Decimal::mul_ratio(std::int64_t num, std::int64_t den) const {
  if (den == 0) inexact("division by zero");
  int128_t product = checked_mul(raw_, num);
  if (product % den != 0) {
    inexact(to_string() + " * " + std::to_string(num) + "/" + std::to_string(den) +
            " is not representable");
  }
  return from_raw(product / den);
}

Decimal Decimal::half_floor() const { return from_raw(floor_div(raw_, 2)); }

Decimal Decimal::operator-() const { return from_raw(-raw_); }

Decimal operator+(Decimal a, Decimal b) { return Decimal::from_raw(checked_add(a.raw_, b.raw_)); }

Decimal operator-(Decimal a, Decimal b) { return Decimal::from_raw(checked_add(a.raw_, -b.raw_)); }

}  // namespace css
