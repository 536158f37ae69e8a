#include "css/literal.hpp"

#include "css/error.hpp"

namespace css {

std::string_view to_string(Datatype type) {
  switch (type) {
    case Datatype::Integer: return "integer";
    case Datatype::Real: return "real";
    case Datatype::Enum: return "enum";
    case Datatype::Boolean: return "boolean";
  }
  return "?";
}

std::optional<Datatype> parse_datatype(std::string_view text) {
  if (text == "integer") return Datatype::Integer;
  if (text == "real") return Datatype::Real;
  if (text == "enum") return Datatype::Enum;
  if (text == "boolean") return Datatype::Boolean;
  return std::nullopt;
}

Literal Literal::integer(std::int64_t value) {
  return Literal(Datatype::Integer, Decimal::from_int(value));
}

Literal Literal::integer(Decimal value) {
  if (!value.is_integer()) {
    throw Error(ErrorCode::TypeMismatch, "value " + value.to_string() + " is not an integer");
  }
  return Literal(Datatype::Integer, value);
}

Literal Literal::real(Decimal value) { return Literal(Datatype::Real, value); }

Literal Literal::symbol(std::string value) { return Literal(Datatype::Enum, std::move(value)); }

Literal Literal::boolean(bool value) { return Literal(Datatype::Boolean, value); }

const Decimal& Literal::number() const {
  if (!is_numeric()) {
    throw Error(ErrorCode::TypeMismatch, "literal '" + to_string() + "' is not numeric");
  }
  return std::get<Decimal>(value_);
}

const std::string& Literal::symbol() const {
  if (type_ != Datatype::Enum) {
    throw Error(ErrorCode::TypeMismatch, "literal '" + to_string() + "' is not an enum value");
  }
  return std::get<std::string>(value_);
}

bool Literal::flag() const {
  if (type_ != Datatype::Boolean) {
    throw Error(ErrorCode::TypeMismatch, "literal '" + to_string() + "' is not a boolean");
  }
  return std::get<bool>(value_);
}

std::string Literal::to_string() const {
  switch (type_) {
    case Datatype::Integer:
    case Datatype::Real: return std::get<Decimal>(value_).to_string();
    case Datatype::Enum: return std::get<std::string>(value_);
    case Datatype::Boolean: return std::get<bool>(value_) ? "true" : "false";
  }
  return {};
}

std::optional<Literal> coerce(const Literal& value, Datatype target) {
  if (value.type() == target) return value;
  if (value.is_numeric() && target == Datatype::Real) return Literal::real(value.number());
  if (value.is_numeric() && target == Datatype::Integer && value.number().is_integer()) {
    return Literal::integer(value.number());
  }
  return std::nullopt;
}

}  // namespace css
