#include "css/units.hpp"

#include <array>

#include "css/error.hpp"

namespace css {
namespace {

constexpr std::array<UnitInfo, 8> kUnits{{
    {"mm", "m", 1, 1000},
    {"cm", "m", 1, 100},
    {"m", "m", 1, 1},
    {"s", "s", 1, 1},
    {"min", "s", 60, 1},
    {"h", "s", 3600, 1},
    {"g", "kg", 1, 1000},
    {"kg", "kg", 1, 1},
}};

UnitInfo require_unit(std::string_view unit) {
  auto info = find_unit(unit);
  if (!info) throw Error(ErrorCode::UnknownUnit, "unknown unit '" + std::string(unit) + "'");
  return *info;
}

}  // namespace

std::optional<UnitInfo> find_unit(std::string_view unit) {
  for (const auto& info : kUnits) {
    if (info.name == unit) return info;
  }
  return std::nullopt;
}

std::pair<Decimal, std::string> canonicalize_unit(Decimal value, std::string_view unit) {
  UnitInfo info = require_unit(unit);
  return {value.mul_ratio(info.num, info.den), std::string(info.base)};
}

bool same_dimension(std::string_view a, std::string_view b) {
  auto ua = find_unit(a);
  auto ub = find_unit(b);
  return ua && ub && ua->base == ub->base;
}

Decimal convert_unit(Decimal value, std::string_view from, std::string_view to) {
  if (from == to) {
    require_unit(from);
    return value;
  }
  UnitInfo src = require_unit(from);
  UnitInfo dst = require_unit(to);
  if (src.base != dst.base) {
    throw Error(ErrorCode::UnitMismatch, "cannot convert '" + std::string(from) + "' to '" +
                                             std::string(to) + "'");
  }
  // Go through the base unit with a single combined ratio to stay exact when
  // possible (e.g. 1.5 cm -> 15 mm).
  return value.mul_ratio(src.num * dst.den, src.den * dst.num);
}

}  // namespace css
