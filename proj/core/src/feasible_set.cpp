#include "css/feasible_set.hpp"

#include <algorithm>
#include <iterator>

#include "css/error.hpp"

namespace css {
namespace {

const Decimal kOne = Decimal::one();

// Tighter of two lower bounds.
Bound max_lower(const Bound& a, const Bound& b) {
  if (!a.value) return b;
  if (!b.value) return a;
  if (*a.value != *b.value) return *a.value > *b.value ? a : b;
  return Bound{a.value, a.open || b.open};
}

Bound min_upper(const Bound& a, const Bound& b) {
  if (!a.value) return b;
  if (!b.value) return a;
  if (*a.value != *b.value) return *a.value < *b.value ? a : b;
  return Bound{a.value, a.open || b.open};
}

// Lower bound `inner` is at least as tight as `outer`.
bool lower_within(const Bound& inner, const Bound& outer) {
  if (!outer.value) return true;
  if (!inner.value) return false;
  if (*inner.value != *outer.value) return *inner.value > *outer.value;
  return !outer.open || inner.open;
}

bool upper_within(const Bound& inner, const Bound& outer) {
  if (!outer.value) return true;
  if (!inner.value) return false;
  if (*inner.value != *outer.value) return *inner.value < *outer.value;
  return !outer.open || inner.open;
}

std::string join(const auto& values, auto render) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : values) {
    if (!first) out += ", ";
    out += render(v);
    first = false;
  }
  return out + "}";
}

}  // namespace

FeasibleSet FeasibleSet::full_numeric(bool integral) {
  return interval(integral, Bound::unbounded(), Bound::unbounded());
}

FeasibleSet FeasibleSet::interval(bool integral, Bound lo, Bound hi, std::set<Decimal> excluded) {
  FeasibleSet s;
  s.kind_ = Kind::Interval;
  s.integral_ = integral;
  s.lo_ = lo;
  s.hi_ = hi;
  s.excluded_ = std::move(excluded);
  s.canonicalize();
  return s;
}

FeasibleSet FeasibleSet::points(bool integral, std::set<Decimal> values) {
  FeasibleSet s;
  s.kind_ = Kind::Points;
  s.integral_ = integral;
  s.points_ = std::move(values);
  s.canonicalize();
  return s;
}

FeasibleSet FeasibleSet::symbols(std::set<std::string> values) {
  FeasibleSet s;
  s.kind_ = Kind::Symbols;
  s.symbols_ = std::move(values);
  return s;
}

void FeasibleSet::canonicalize() {
  if (kind_ == Kind::Symbols) return;
  if (kind_ == Kind::Points) {
    if (integral_) std::erase_if(points_, [](const Decimal& d) { return !d.is_integer(); });
    return;
  }
  if (!lo_.value) lo_.open = false;
  if (!hi_.value) hi_.open = false;
  auto make_empty = [this] {
    kind_ = Kind::Points;
    lo_ = hi_ = Bound{};
    excluded_.clear();
    points_.clear();
  };

  if (integral_) {
    if (lo_.value) lo_ = Bound::closed(lo_.open ? lo_.value->floor() + kOne : lo_.value->ceil());
    if (hi_.value) hi_ = Bound::closed(hi_.open ? hi_.value->ceil() - kOne : hi_.value->floor());
    std::erase_if(excluded_, [](const Decimal& d) { return !d.is_integer(); });
    for (;;) {
      if (lo_.value && hi_.value && *lo_.value > *hi_.value) return make_empty();
      if (lo_.value && excluded_.count(*lo_.value)) {
        lo_.value = *lo_.value + kOne;
      } else if (hi_.value && excluded_.count(*hi_.value)) {
        hi_.value = *hi_.value - kOne;
      } else {
        break;
      }
    }
  } else {
    if (lo_.value && hi_.value) {
      if (*lo_.value > *hi_.value) return make_empty();
      if (*lo_.value == *hi_.value) {
        if (lo_.open || hi_.open || excluded_.count(*lo_.value)) return make_empty();
        excluded_.clear();
        return;
      }
    }
    if (lo_.value && excluded_.count(*lo_.value)) lo_.open = true;
    if (hi_.value && excluded_.count(*hi_.value)) hi_.open = true;
  }
  std::erase_if(excluded_, [this](const Decimal& d) {
    return (lo_.value && d <= *lo_.value) || (hi_.value && d >= *hi_.value);
  });
}

bool FeasibleSet::is_empty() const noexcept {
  switch (kind_) {
    case Kind::Interval: return false;
    case Kind::Points: return points_.empty();
    case Kind::Symbols: return symbols_.empty();
  }
  return true;
}

bool FeasibleSet::contains(const Decimal& v) const {
  if (kind_ == Kind::Symbols) return false;
  if (integral_ && !v.is_integer()) return false;
  if (kind_ == Kind::Points) return points_.count(v) > 0;
  if (lo_.value && (v < *lo_.value || (v == *lo_.value && lo_.open))) return false;
  if (hi_.value && (v > *hi_.value || (v == *hi_.value && hi_.open))) return false;
  return excluded_.count(v) == 0;
}

bool FeasibleSet::contains(const std::string& symbol) const {
  return kind_ == Kind::Symbols && symbols_.count(symbol) > 0;
}

bool FeasibleSet::contains(const Literal& value) const {
  switch (value.type()) {
    case Datatype::Integer:
    case Datatype::Real: return contains(value.number());
    case Datatype::Enum: return contains(value.symbol());
    case Datatype::Boolean: return contains(std::string(value.flag() ? "true" : "false"));
  }
  return false;
}

FeasibleSet FeasibleSet::intersect(const FeasibleSet& other) const {
  if (is_numeric() != other.is_numeric()) {
    throw Error(ErrorCode::TypeMismatch, "cannot intersect numeric and symbolic sets");
  }
  if (kind_ == Kind::Symbols) {
    std::set<std::string> out;
    std::set_intersection(symbols_.begin(), symbols_.end(), other.symbols_.begin(),
                          other.symbols_.end(), std::inserter(out, out.end()));
    return symbols(std::move(out));
  }
  bool integral = integral_ || other.integral_;
  if (kind_ == Kind::Points || other.kind_ == Kind::Points) {
    const FeasibleSet& pts = kind_ == Kind::Points ? *this : other;
    const FeasibleSet& rest = kind_ == Kind::Points ? other : *this;
    std::set<Decimal> out;
    for (const auto& p : pts.points_) {
      if (rest.contains(p)) out.insert(p);
    }
    return points(integral, std::move(out));
  }
  std::set<Decimal> excluded = excluded_;
  excluded.insert(other.excluded_.begin(), other.excluded_.end());
  return interval(integral, max_lower(lo_, other.lo_), min_upper(hi_, other.hi_),
                  std::move(excluded));
}

bool FeasibleSet::subset_of(const FeasibleSet& other) const {
  if (is_empty()) return true;
  if (other.is_empty()) return false;
  if (is_numeric() != other.is_numeric()) return false;
  switch (kind_) {
    case Kind::Symbols:
      return std::includes(other.symbols_.begin(), other.symbols_.end(), symbols_.begin(),
                           symbols_.end());
    case Kind::Points:
      return std::all_of(points_.begin(), points_.end(),
                         [&](const Decimal& p) { return other.contains(p); });
    case Kind::Interval: break;
  }
  if (other.kind_ == Kind::Points) {
    if (!lo_.value || !hi_.value) return false;
    if (!integral_) return *lo_.value == *hi_.value && other.contains(*lo_.value);
    // Finite integer interval: compare cardinalities before enumerating.
    Decimal span = *hi_.value - *lo_.value + kOne;
    Decimal members = span - Decimal::from_int(static_cast<std::int64_t>(excluded_.size()));
    if (members > Decimal::from_int(static_cast<std::int64_t>(other.points_.size()))) return false;
    for (Decimal v = *lo_.value; v <= *hi_.value; v += kOne) {
      if (!excluded_.count(v) && !other.contains(v)) return false;
    }
    return true;
  }
  if (!lower_within(lo_, other.lo_) || !upper_within(hi_, other.hi_)) return false;
  for (const auto& e : other.excluded_) {
    if (contains(e)) return false;
  }
  return true;
}

std::optional<Literal> FeasibleSet::witness(Datatype type) const {
  if (is_empty()) return std::nullopt;
  auto numeric = [&](Decimal v) {
    return type == Datatype::Integer || integral_ ? Literal::integer(v) : Literal::real(v);
  };
  if (kind_ == Kind::Symbols) {
    const std::string& first = *symbols_.begin();
    return type == Datatype::Boolean ? Literal::boolean(first == "true") : Literal::symbol(first);
  }
  if (kind_ == Kind::Points) return numeric(*points_.begin());

  if (integral_) {
    Decimal mid;
    if (lo_.value && hi_.value) {
      mid = (*lo_.value + *hi_.value).half_floor().floor();
    } else if (lo_.value) {
      mid = *lo_.value;
    } else if (hi_.value) {
      mid = *hi_.value;
    }
    // The set is non-empty and only finitely many points are excluded.
    for (std::int64_t k = 0;; ++k) {
      Decimal up = mid + Decimal::from_int(k);
      if (contains(up)) return numeric(up);
      Decimal down = mid - Decimal::from_int(k);
      if (contains(down)) return numeric(down);
    }
  }

  if (lo_.value && hi_.value) {
    if (*lo_.value == *hi_.value) return numeric(*lo_.value);
    Decimal mid = (*lo_.value + *hi_.value).half_floor();
    for (std::size_t guard = 0; !contains(mid) && guard <= excluded_.size(); ++guard) {
      auto next = excluded_.upper_bound(mid);
      Decimal ceiling = next == excluded_.end() ? *hi_.value : *next;
      mid = (mid + ceiling).half_floor();
    }
    return numeric(mid);
  }
  Decimal c;
  Decimal step = kOne;
  if (lo_.value) {
    c = lo_.open ? *lo_.value + kOne : *lo_.value;
  } else if (hi_.value) {
    c = hi_.open ? *hi_.value - kOne : *hi_.value;
    step = -kOne;
  }
  while (!contains(c)) c += step;
  return numeric(c);
}

std::string FeasibleSet::to_string() const {
  if (is_empty()) return "EMPTY";
  if (kind_ == Kind::Symbols) return join(symbols_, [](const std::string& s) { return s; });
  auto dec = [](const Decimal& d) { return d.to_string(); };
  if (kind_ == Kind::Points) return join(points_, dec);
  std::string out = lo_.value ? (lo_.open ? "(" : "[") + lo_.value->to_string() : "(-inf";
  out += ", ";
  out += hi_.value ? hi_.value->to_string() + (hi_.open ? ")" : "]") : "+inf)";
  if (!excluded_.empty()) out += " \\ " + join(excluded_, dec);
  return out;
}

}  // namespace css
