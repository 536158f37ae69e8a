#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "css/error.hpp"
#include "css/expression.hpp"
#include "css/feasible_set.hpp"
#include "css/model.hpp"
#include "css/units.hpp"

namespace css {

/// Per-property feasible sets of a capability expression. Properties missing
/// from `feasible` are unconstrained.
struct NormalForm {
  std::string classId;
  std::map<std::string, FeasibleSet> feasible;

  friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

/// Parses `Class ('and' '(' atom ')')*` where an atom is `prop cmp literal [unit]`
/// or `prop in {v1, v2}`. Throws SyntaxError, or Error with UnknownClass,
/// UnknownProperty, TypeMismatch, UnitMismatch, UnknownUnit.
CapabilityExpression parse_expression(std::string_view text, const WorldModel& world);

struct ExpressionProblem {
  ErrorCode code;
  std::string message;
};

/// Semantic checks on an already-built expression (class and property
/// resolution, comparator/datatype legality, unit dimensions).
std::vector<ExpressionProblem> check_expression(const CapabilityExpression& expr,
                                                const WorldModel& world);

/// Throws the first problem reported by check_expression.
void require_valid(const CapabilityExpression& expr, const WorldModel& world);

/// Intersects all atoms per property after converting literals into the
/// property's unit. Integer bounds are tightened; EMPTY sets are legal.
NormalForm normalize(const CapabilityExpression& expr, const WorldModel& world);

/// Re-encodes a normal form as an expression that normalizes back to it.
CapabilityExpression to_expression(const NormalForm& nf, const WorldModel& world);

/// Converts an atom operand into the property's unit.
Decimal operand_in_property_unit(const Quantity& operand, const PropertyDefinition& def);

/// Direct evaluation of every atom against concrete property values given in
/// property units. A constrained property without a value fails.
bool evaluate_atoms(const CapabilityExpression& expr, const ParameterMap& values,
                    const WorldModel& world);

std::string to_string(const NormalForm& nf);

}  // namespace css
