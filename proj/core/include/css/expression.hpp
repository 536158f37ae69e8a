#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "css/literal.hpp"

namespace css {

enum class Comparator { Less, LessEqual, Greater, GreaterEqual, Equal, NotEqual, In };

std::string_view to_string(Comparator cmp);

/// A literal with an optional unit as written in an expression ("15 mm").
struct Quantity {
  Literal value;
  std::optional<std::string> unit;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

/// `prop cmp literal [unit]`, or `prop in {v1, v2}` with one operand per member.
struct Atom {
  std::string propertyId;
  Comparator comparator = Comparator::Equal;
  std::vector<Quantity> operands;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Taxonomy class conjoined with property constraints. Conjunction only.
struct CapabilityExpression {
  std::string classId;
  std::vector<Atom> constraints;

  friend bool operator==(const CapabilityExpression&, const CapabilityExpression&) = default;
};

/// Renders in the textual grammar; parse_expression(to_string(e)) == e.
std::string to_string(const CapabilityExpression& expr);
std::string to_string(const Atom& atom);

}  // namespace css
