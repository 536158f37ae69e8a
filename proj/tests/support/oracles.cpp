#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace css::testing {
namespace {

const std::vector<TaxonomyClass> kClasses = {
    {"Manufacturing", "", ""}, {"Separating", "Manufacturing", ""}, {"Drilling", "Separating", ""},
    {"Milling", "Separating", ""}, {"Joining", "Manufacturing", ""}, {"Screwing", "Joining", ""},
};

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

bool atom_holds(const OracleAtom& a, std::int64_t v) {
  const std::int64_t x = 2 * v;
  switch (a.op) {
    case OracleAtom::Lt: return x < a.halves[0];
    case OracleAtom::Le: return x <= a.halves[0];
    case OracleAtom::Gt: return x > a.halves[0];
    case OracleAtom::Ge: return x >= a.halves[0];
    case OracleAtom::Eq: return x == a.halves[0];
    case OracleAtom::Ne: return x != a.halves[0];
    case OracleAtom::In: return std::find(a.halves.begin(), a.halves.end(), x) != a.halves.end();
  }
  return false;
}

bool ancestor_or_self(const std::string& a, const std::string& b) {
  std::string cur = a;
  while (!cur.empty()) {
    if (cur == b) return true;
    auto it = std::find_if(kClasses.begin(), kClasses.end(), [&](const auto& c) { return c.id == cur; });
    cur = it->parent;
  }
  return false;
}

std::vector<bool> point_set(const OracleExpr& e, const std::string& prop, std::int64_t lo, std::int64_t hi) {
  std::vector<bool> out(static_cast<std::size_t>(hi - lo + 1), true);
  for (const auto& [p, atom] : e.atoms) {
    if (p != prop) continue;
    for (std::int64_t v = lo; v <= hi; ++v) {
      if (!atom_holds(atom, v)) out[static_cast<std::size_t>(v - lo)] = false;
    }
  }
  return out;
}

std::string half_text(std::int64_t halves) {
  std::string s = std::to_string(halves / 2);
  if (halves % 2 != 0) {
    if (halves < 0 && halves / 2 == 0) s = "-0";
    s += ".5";
  }
  return s;
}

}  // namespace

WorldModel random_integer_world(Rng& rng) {
  WorldModel w;
  w.taxonomy = Taxonomy(kClasses);
  for (const char* id : {"p1", "p2", "p3"}) {
    std::int64_t lo = uniform(rng, -50, 50);
    std::int64_t span = uniform(rng, 0, 9999);
    w.propertyDefs.push_back({id, Datatype::Integer, "mm", {},
                              DeclaredRange{Decimal::from_int(lo), Decimal::from_int(lo + span)}});
  }
  return w;
}

OracleExpr random_oracle_expr(const WorldModel& world, Rng& rng) {
  OracleExpr e;
  e.classId = kClasses[static_cast<std::size_t>(uniform(rng, 0, 5))].id;
  // Bias towards Drilling so most pairs share a class and exercise sets.
  if (uniform(rng, 0, 2) == 0) e.classId = "Drilling";
  int n = static_cast<int>(uniform(rng, 0, 4));
  for (int i = 0; i < n; ++i) {
    const auto& def = world.propertyDefs[static_cast<std::size_t>(uniform(rng, 0, 2))];
    std::int64_t lo = def.declaredRange->lower.to_int64(), hi = def.declaredRange->upper.to_int64();
    auto point = [&] {
      // Mostly in range, sometimes just outside, sometimes a half value.
      std::int64_t v = uniform(rng, lo - 3, hi + 3);
      return 2 * v + (uniform(rng, 0, 5) == 0 ? 1 : 0);
    };
    OracleAtom a;
    a.op = static_cast<OracleAtom::Op>(uniform(rng, 0, 6));
    if (a.op == OracleAtom::In) {
      int k = static_cast<int>(uniform(rng, 0, 4));
      for (int j = 0; j < k; ++j) a.halves.push_back(2 * uniform(rng, lo - 1, std::min(hi + 1, lo + 12)));
    } else if (a.op == OracleAtom::Eq || a.op == OracleAtom::Ne) {
      a.halves.push_back(2 * uniform(rng, lo, std::min(hi, lo + 6)));
    } else {
      a.halves.push_back(point());
    }
    e.atoms.emplace_back(def.id, a);
  }
  return e;
}

std::string render(const OracleExpr& expr, Rng& rng) {
  static const char* ops[] = {"<", "<=", ">", ">=", "=", "!="};
  std::string s = expr.classId;
  for (const auto& [prop, a] : expr.atoms) {
    s += " and (" + prop + " ";
    if (a.op == OracleAtom::In) {
      s += "in {";
      for (std::size_t i = 0; i < a.halves.size(); ++i) s += (i ? ", " : "") + std::to_string(a.halves[i] / 2);
      s += "})";
      continue;
    }
    s += ops[a.op];
    s += " ";
    std::int64_t h = a.halves[0];
    bool even_mm = h % 20 == 0;
    int style = static_cast<int>(uniform(rng, 0, 2));
    if (style == 0) {
      s += half_text(h) + " mm";
    } else if (style == 1 && even_mm) {
      s += std::to_string(h / 20) + " cm";
    } else {
      s += half_text(h);
    }
    s += ")";
  }
  return s;
}

MatchDegree enumerate_degree(const OracleExpr& required, const OracleExpr& provided, const WorldModel& world) {
  bool rc_in_pc = ancestor_or_self(required.classId, provided.classId);
  bool pc_in_rc = ancestor_or_self(provided.classId, required.classId);
  if (!rc_in_pc && !pc_in_rc) return MatchDegree::Disjoint;
  bool meet = true, r_in_p = rc_in_pc, p_in_r = pc_in_rc;
  for (const auto& def : world.propertyDefs) {
    std::int64_t lo = def.declaredRange->lower.to_int64(), hi = def.declaredRange->upper.to_int64();
    auto r = point_set(required, def.id, lo, hi);
    auto p = point_set(provided, def.id, lo, hi);
    bool any = false, rp = true, pr = true;
    for (std::size_t i = 0; i < r.size(); ++i) {
      any |= r[i] && p[i];
      if (r[i] && !p[i]) rp = false;
      if (p[i] && !r[i]) pr = false;
    }
    meet &= any;
    r_in_p &= rp;
    p_in_r &= pr;
  }
  if (!meet) return MatchDegree::Disjoint;
  if (r_in_p && p_in_r) return MatchDegree::Exact;
  if (r_in_p) return MatchDegree::Plugin;
  if (p_in_r) return MatchDegree::Subsume;
  return MatchDegree::Intersect;
}

bool satisfies(const OracleExpr& expr, const ParameterMap& values) {
  for (const auto& [prop, atom] : expr.atoms) {
    auto it = values.find(prop);
    if (it == values.end() || !atom_holds(atom, it->second.number().to_int64())) return false;
  }
  return true;
}

// Market instances: two to four capKeys over Drilling/Screwing. Each offer
// either envelops the requirement ("Drilling") or misses it
// ("Drilling and (depth <= 5 mm)" against depth in [10, 12]).

namespace {

WorldModel market_world() {
  WorldModel w;
  w.taxonomy = Taxonomy(kClasses);
  w.propertyDefs.push_back({"depth", Datatype::Integer, "mm", {},
                            DeclaredRange{Decimal(), Decimal::from_int(100)}});
  return w;
}

}  // namespace

MarketInstance random_market(Rng& rng, std::size_t max_offers) {
  MarketInstance m;
  m.world = market_world();
  const Timestamp base{1'790'000'000'000};
  m.now = base;
  auto& r = m.request;
  r.requestId = "rq-" + std::to_string(uniform(rng, 1, 999));
  int keys = static_cast<int>(uniform(rng, 1, 4));
  for (int k = 0; k < keys; ++k) {
    CapabilityExpression e{"Drilling", {{"depth", Comparator::GreaterEqual, {{Literal::integer(10), "mm"}}},
                                        {"depth", Comparator::LessEqual, {{Literal::integer(12), "mm"}}}}};
    r.requiredCapabilities.push_back({"k" + std::to_string(k), e});
  }
  r.tender.quantity = uniform(rng, 1, 5);
  r.tender.maxUnitPrice = Decimal::from_int(uniform(rng, 5, 20));
  r.tender.maxCo2PerUnit = Decimal::from_int(3);
  r.tender.deliveryDeadline = Timestamp{base.millis + 10 * 86'400'000LL};
  if (uniform(rng, 0, 1)) r.tender.requiredCertifications = {"ISO9001"};
  r.tender.ndaRequired = uniform(rng, 0, 1) == 1;
  r.submittedAt = Timestamp{base.millis - 86'400'000LL};
  r.responseDeadline = base;

  std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_offers)));
  for (std::size_t i = 0; i < n; ++i) {
    ServiceOffer o;
    o.offerId = "o" + std::to_string(10 + i);
    o.providerId = "prov-" + std::to_string(uniform(rng, 1, 4));
    o.requestId = r.requestId;
    for (int k = 0; k < keys; ++k) {
      if (uniform(rng, 0, 2) == 0) o.coveredCapKeys.push_back("k" + std::to_string(k));
    }
    if (o.coveredCapKeys.empty()) o.coveredCapKeys.push_back("k" + std::to_string(uniform(rng, 0, keys - 1)));
    bool covers = uniform(rng, 0, 7) != 0;
    for (const auto& key : o.coveredCapKeys) {
      CapabilityExpression e{"Drilling", {}};
      if (!covers) e.constraints.push_back({"depth", Comparator::LessEqual, {{Literal::integer(5), "mm"}}});
      o.providedCapabilities.emplace(key, e);
    }
    // Prices in cents so ties and sums stay exact.
    o.unitPrice = Decimal::from_int(uniform(rng, 100, 2400)).mul_ratio(1, 100);
    o.co2PerUnit = Decimal::from_int(uniform(rng, 0, 35)).mul_ratio(1, 10);
    o.deliveryDate = Timestamp{base.millis + uniform(rng, 1, 11) * 86'400'000LL};
    if (uniform(rng, 0, 5)) o.certifications.insert("ISO9001");
    o.ndaAccepted = uniform(rng, 0, 5) != 0;
    o.validUntil = Timestamp{base.millis + uniform(rng, -2, 5) * 3'600'000LL};
    if (uniform(rng, 0, 3) == 0) o.exclusiveGroup = "g" + std::to_string(uniform(rng, 1, 2));
    m.offers.push_back(std::move(o));
  }
  return m;
}

bool oracle_admissible(const MarketInstance& m, const ServiceOffer& o) {
  const auto& t = m.request.tender;
  for (const auto& [key, e] : o.providedCapabilities) {
    if (!e.constraints.empty()) return false;
  }
  if (o.unitPrice > t.maxUnitPrice || o.co2PerUnit > t.maxCo2PerUnit) return false;
  if (o.deliveryDate > t.deliveryDeadline) return false;
  for (const auto& c : t.requiredCertifications) {
    if (!o.certifications.count(c)) return false;
  }
  return !t.ndaRequired || o.ndaAccepted;
}

namespace {

bool valid_selection(const MarketInstance& m, const std::vector<const ServiceOffer*>& chosen) {
  std::map<std::string, int> cover;
  std::set<std::string> groups;
  for (const auto* o : chosen) {
    if (o->validUntil < m.now || !oracle_admissible(m, *o)) return false;
    if (o->exclusiveGroup && !groups.insert(*o->exclusiveGroup).second) return false;
    for (const auto& k : o->coveredCapKeys) ++cover[k];
  }
  if (cover.size() != m.request.requiredCapabilities.size()) return false;
  for (const auto& rc : m.request.requiredCapabilities) {
    auto it = cover.find(rc.capKey);
    if (it == cover.end() || it->second != 1) return false;
  }
  return true;
}

}  // namespace

std::optional<Decimal> exhaustive_min_cost(const MarketInstance& m) {
  std::optional<Decimal> best;
  const std::size_t n = m.offers.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<const ServiceOffer*> chosen;
    Decimal sum;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        chosen.push_back(&m.offers[i]);
        sum += m.offers[i].unitPrice;
      }
    }
    if (!valid_selection(m, chosen)) continue;
    Decimal cost = sum.mul_int(m.request.tender.quantity);
    if (!best || cost < *best) best = cost;
  }
  return best;
}

std::optional<std::string> award_violation(const MarketInstance& m, const Award& award) {
  std::vector<const ServiceOffer*> chosen;
  Decimal sum;
  for (const auto& o : award.selected) {
    chosen.push_back(&o);
    sum += o.unitPrice;
  }
  if (!valid_selection(m, chosen)) return "award is not an exactly-once, group-exclusive, admissible cover";
  if (sum.mul_int(m.request.tender.quantity) != award.totalCost) return "totalCost is not quantity x sum(unitPrice)";
  return std::nullopt;
}

}  // namespace css::testing
