#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "css/decimal.hpp"

namespace css {

/// One row of the fixed scale table: value_in_base = value * num / den.
struct UnitInfo {
  std::string_view name;
  std::string_view base;
  std::int64_t num;
  std::int64_t den;
};

/// Table lookup; nullopt for units outside the table.
std::optional<UnitInfo> find_unit(std::string_view unit);

/// Rescales into the base unit of the unit's dimension: (15, "mm") -> (0.015, "m").
/// Throws UnknownUnit.
std::pair<Decimal, std::string> canonicalize_unit(Decimal value, std::string_view unit);

/// True when both units are known and share a base unit.
bool same_dimension(std::string_view a, std::string_view b);

/// Converts between two units of one dimension. Throws UnknownUnit,
/// UnitMismatch, or InexactArithmetic.
Decimal convert_unit(Decimal value, std::string_view from, std::string_view to);

}  // namespace css
