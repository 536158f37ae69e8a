#include <doctest.h>

#include "css/decimal.hpp"
#include "css/error.hpp"
#include "css/literal.hpp"
#include "css/timestamp.hpp"
#include "css/units.hpp"

using namespace css;

namespace {

Decimal D(const char* text) { return Decimal::parse(text); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::NotFound;
}

}  // namespace

TEST_CASE("decimal parsing and shortest rendering") {
  CHECK(D("4.50").to_string() == "4.5");
  CHECK(D("-0.015").to_string() == "-0.015");
  CHECK(D("+12").to_string() == "12");
  CHECK(D("0.000000000000000001").to_string() == "0.000000000000000001");
  CHECK_FALSE(Decimal::try_parse("0.0000000000000000001"));
  CHECK_FALSE(Decimal::try_parse("1e5"));
  CHECK_FALSE(Decimal::try_parse(""));
  CHECK_FALSE(Decimal::try_parse("."));
  CHECK(code_of([] { Decimal::parse("abc"); }) == ErrorCode::ParseError);
}

TEST_CASE("decimal arithmetic is exact") {
  // 0.1 + 0.2 is exactly 0.3, unlike binary floating point.
  CHECK(D("0.1") + D("0.2") == D("0.3"));
  CHECK(D("4.5").mul_int(3) == D("13.5"));
  CHECK(D("15").mul_ratio(1, 1000) == D("0.015"));
  CHECK(code_of([] { D("1").mul_ratio(1, 3); }) == ErrorCode::InexactArithmetic);
  CHECK(D("12.5").floor() == D("12"));
  CHECK(D("-12.5").floor() == D("-13"));
  CHECK(D("-12.5").ceil() == D("-12"));
  CHECK(D("25").half_floor() == D("12.5"));
  CHECK(D("7").is_integer());
  CHECK_FALSE(D("7.25").is_integer());
  CHECK(D("-7").to_int64() == -7);
  CHECK(D("2") < D("10"));
}

TEST_CASE("unit table") {
  auto [v, unit] = canonicalize_unit(Decimal::from_int(15), "mm");
  CHECK(v == D("0.015"));
  CHECK(unit == "m");
  auto [minutes, s] = canonicalize_unit(Decimal::from_int(2), "min");
  CHECK(minutes == D("120"));
  CHECK(s == "s");
  CHECK(canonicalize_unit(D("3"), "h").first == D("10800"));
  CHECK(canonicalize_unit(D("250"), "g").first == D("0.25"));
  CHECK(code_of([] { canonicalize_unit(Decimal::one(), "furlong"); }) == ErrorCode::UnknownUnit);
  CHECK(convert_unit(D("1.5"), "cm", "mm") == D("15"));
  CHECK(convert_unit(D("12"), "mm", "m") == D("0.012"));
  CHECK(code_of([] { convert_unit(Decimal::one(), "mm", "s"); }) == ErrorCode::UnitMismatch);
  CHECK(same_dimension("mm", "m"));
  CHECK_FALSE(same_dimension("kg", "m"));
}

TEST_CASE("literal coercion") {
  CHECK(coerce(Literal::integer(12), Datatype::Real) == Literal::real(D("12")));
  CHECK(coerce(Literal::real(D("12")), Datatype::Integer) == Literal::integer(12));
  CHECK_FALSE(coerce(Literal::real(D("12.5")), Datatype::Integer));
  CHECK_FALSE(coerce(Literal::symbol("steel"), Datatype::Integer));
  CHECK(coerce(Literal::boolean(true), Datatype::Boolean) == Literal::boolean(true));
  CHECK(code_of([] { Literal::integer(D("1.5")); }) == ErrorCode::TypeMismatch);
  CHECK(Literal::real(D("0.015")).to_string() == "0.015");
}

TEST_CASE("timestamps") {
  auto t = Timestamp::parse("2026-10-10T08:30:00Z");
  CHECK(t.to_string() == "2026-10-10T08:30:00Z");
  CHECK(Timestamp::parse("1970-01-01T00:00:01.250Z").millis == 1250);
  CHECK(Timestamp::parse("2026-10-10T08:30:00.500Z").to_string() == "2026-10-10T08:30:00.500Z");
  CHECK(Timestamp::parse("2000-03-01T00:00:00Z").millis - Timestamp::parse("2000-02-28T00:00:00Z").millis ==
        2 * 86'400'000LL);
  CHECK_FALSE(Timestamp::try_parse("2026-10-10 08:30:00"));
  CHECK_FALSE(Timestamp::try_parse("2026-13-01T00:00:00Z"));
  CHECK_FALSE(Timestamp::try_parse("2026-10-10T08:30:00+02:00"));
}
