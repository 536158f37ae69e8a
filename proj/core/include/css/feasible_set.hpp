#pragma once

#include <optional>
#include <set>
#include <string>

#include "css/decimal.hpp"
#include "css/literal.hpp"

namespace css {

/// One end of a numeric interval; no value means unbounded.
struct Bound {
  std::optional<Decimal> value;
  bool open = false;

  static Bound unbounded() { return {}; }
  static Bound closed(Decimal v) { return {v, false}; }
  static Bound exclusive(Decimal v) { return {v, true}; }

  friend bool operator==(const Bound&, const Bound&) = default;
};

/// Set of admissible values for one property, always held in canonical form:
///
///  * Interval: numeric range minus finitely many excluded points. Integer
///    intervals have closed integral bounds; excluded points are strictly
///    interior (an excluded endpoint tightens or opens the bound instead).
///  * Points: finite numeric set (from `in` / `=`); the empty numeric set is
///    an empty Points set.
///  * Symbols: finite set of enum values or "false"/"true".
class FeasibleSet {
 public:
  enum class Kind { Interval, Points, Symbols };

  static FeasibleSet full_numeric(bool integral);
  static FeasibleSet interval(bool integral, Bound lo, Bound hi, std::set<Decimal> excluded = {});
  static FeasibleSet points(bool integral, std::set<Decimal> values);
  static FeasibleSet symbols(std::set<std::string> values);
  static FeasibleSet empty_numeric(bool integral) { return points(integral, {}); }

  Kind kind() const noexcept { return kind_; }
  bool integral() const noexcept { return integral_; }
  bool is_numeric() const noexcept { return kind_ != Kind::Symbols; }
  bool is_empty() const noexcept;

  const Bound& lower() const noexcept { return lo_; }
  const Bound& upper() const noexcept { return hi_; }
  const std::set<Decimal>& excluded() const noexcept { return excluded_; }
  const std::set<Decimal>& point_values() const noexcept { return points_; }
  const std::set<std::string>& symbol_values() const noexcept { return symbols_; }

  bool contains(const Decimal& value) const;
  bool contains(const std::string& symbol) const;
  /// Literal membership; numeric literals must match a numeric set.
  bool contains(const Literal& value) const;

  FeasibleSet intersect(const FeasibleSet& other) const;
  /// Set inclusion on the denoted value sets (not the representation).
  bool subset_of(const FeasibleSet& other) const;
  bool equivalent(const FeasibleSet& other) const {
    return subset_of(other) && other.subset_of(*this);
  }

  /// Deterministic member: floor of the interval midpoint for integers, the
  /// midpoint for reals, the smallest member of finite sets. nullopt if empty.
  std::optional<Literal> witness(Datatype type) const;

  /// "[10, 15]", "(-inf, 14]", "[0, 9] \ {3}", "{a, b}", "EMPTY".
  std::string to_string() const;

  friend bool operator==(const FeasibleSet&, const FeasibleSet&) = default;

 private:
  FeasibleSet() = default;
  void canonicalize();

  Kind kind_ = Kind::Interval;
  bool integral_ = false;
  Bound lo_;
  Bound hi_;
  std::set<Decimal> excluded_;
  std::set<Decimal> points_;
  std::set<std::string> symbols_;
};

}  // namespace css
