#include "css/matcher.hpp"

#include <algorithm>
#include <tuple>

namespace css {
namespace {

FeasibleSet domain_of(const PropertyDefinition& def) {
  bool integral = def.datatype == Datatype::Integer;
  switch (def.datatype) {
    case Datatype::Integer:
    case Datatype::Real:
      if (def.declaredRange) {
        return FeasibleSet::interval(integral, Bound::closed(def.declaredRange->lower),
                                     Bound::closed(def.declaredRange->upper));
      }
      return FeasibleSet::full_numeric(integral);
    case Datatype::Enum:
      return FeasibleSet::symbols(std::set<std::string>(def.enumValues.begin(), def.enumValues.end()));
    case Datatype::Boolean: return FeasibleSet::symbols({"false", "true"});
  }
  return FeasibleSet::full_numeric(false);
}

const PropertyDefinition& property(const WorldModel& world, const std::string& id) {
  const PropertyDefinition* def = world.find_property(id);
  if (!def) throw Error(ErrorCode::UnknownProperty, "unknown property '" + id + "'");
  return *def;
}

}  // namespace

std::string_view to_string(MatchDegree degree) {
  switch (degree) {
    case MatchDegree::Exact: return "EXACT";
    case MatchDegree::Plugin: return "PLUGIN";
    case MatchDegree::Subsume: return "SUBSUME";
    case MatchDegree::Intersect: return "INTERSECT";
    case MatchDegree::Disjoint: return "DISJOINT";
  }
  return "?";
}

std::optional<MatchDegree> parse_match_degree(std::string_view text) {
  for (auto d : {MatchDegree::Exact, MatchDegree::Plugin, MatchDegree::Subsume,
                 MatchDegree::Intersect, MatchDegree::Disjoint}) {
    if (to_string(d) == text) return d;
  }
  return std::nullopt;
}

int rank(MatchDegree degree) {
  switch (degree) {
    case MatchDegree::Exact: return 4;
    case MatchDegree::Plugin: return 3;
    case MatchDegree::Subsume: return 2;
    case MatchDegree::Intersect: return 1;
    case MatchDegree::Disjoint: return 0;
  }
  return 0;
}

bool satisfiable(const NormalForm& nf, const Taxonomy& taxonomy) {
  if (!taxonomy.contains(nf.classId)) return false;
  return std::none_of(nf.feasible.begin(), nf.feasible.end(),
                      [](const auto& entry) { return entry.second.is_empty(); });
}

Conjunction conjoin(const NormalForm& required, const NormalForm& provided,
                    const Taxonomy& taxonomy) {
  Conjunction out;
  if (taxonomy.is_subclass_of(required.classId, provided.classId)) {
    out.form.classId = required.classId;
  } else if (taxonomy.is_subclass_of(provided.classId, required.classId)) {
    out.form.classId = provided.classId;
  } else {
    out.disjointClass = true;
    return out;
  }
  out.form.feasible = required.feasible;
  for (const auto& [prop, set] : provided.feasible) {
    auto [it, fresh] = out.form.feasible.emplace(prop, set);
    if (!fresh) it->second = it->second.intersect(set);
  }
  return out;
}

NormalForm restrict_to_domain(const NormalForm& nf, const WorldModel& world) {
  NormalForm out = nf;
  for (auto& [prop, set] : out.feasible) {
    const PropertyDefinition& def = property(world, prop);
    if (def.declaredRange) set = set.intersect(domain_of(def));
  }
  return out;
}

MatchResult match_normal_forms(const NormalForm& required_raw, const NormalForm& provided_raw,
                               const WorldModel& world) {
  const Taxonomy& tax = world.taxonomy;
  NormalForm required = restrict_to_domain(required_raw, world);
  NormalForm provided = restrict_to_domain(provided_raw, world);

  MatchResult result;
  std::set<std::string> props;
  for (const auto& entry : required.feasible) props.insert(entry.first);
  for (const auto& entry : provided.feasible) props.insert(entry.first);
  for (const auto& prop : props) {
    FeasibleSet dom = domain_of(property(world, prop));
    auto side = [&](const NormalForm& nf) {
      auto it = nf.feasible.find(prop);
      return it == nf.feasible.end() ? dom : it->second;
    };
    FeasibleSet r = side(required);
    FeasibleSet p = side(provided);
    result.perProperty.emplace(prop, PropertyComparison{r, p, r.intersect(p)});
  }

  Conjunction both = conjoin(required, provided, tax);
  if (both.disjointClass || !satisfiable(both.form, tax)) {
    result.degree = MatchDegree::Disjoint;
    return result;
  }

  bool required_inside = tax.is_subclass_of(required.classId, provided.classId);
  bool provided_inside = tax.is_subclass_of(provided.classId, required.classId);
  for (const auto& [prop, cmp] : result.perProperty) {
    required_inside = required_inside && cmp.required.subset_of(cmp.provided);
    provided_inside = provided_inside && cmp.provided.subset_of(cmp.required);
  }
  if (required_inside && provided_inside) {
    result.degree = MatchDegree::Exact;
  } else if (required_inside) {
    result.degree = MatchDegree::Plugin;
  } else if (provided_inside) {
    result.degree = MatchDegree::Subsume;
  } else {
    result.degree = MatchDegree::Intersect;
  }

  ParameterMap witness;
  for (const auto& [prop, cmp] : result.perProperty) {
    witness.emplace(prop, *cmp.intersection.witness(property(world, prop).datatype));
  }
  result.witness = std::move(witness);
  return result;
}

MatchResult match_capabilities(const CapabilityExpression& required,
                               const CapabilityExpression& provided, const WorldModel& world) {
  require_valid(required, world);
  require_valid(provided, world);
  return match_normal_forms(normalize(required, world), normalize(provided, world), world);
}

std::vector<RankedProvider> rank_providers(const CapabilityExpression& required,
                                           const std::vector<Candidate>& candidates,
                                           const WorldModel& world) {
  require_valid(required, world);
  NormalForm req = normalize(required, world);
  std::vector<RankedProvider> ranked;
  for (const auto& candidate : candidates) {
    if (!check_expression(candidate.capability.expression, world).empty()) continue;
    MatchResult result =
        match_normal_forms(req, normalize(candidate.capability.expression, world), world);
    if (result.degree == MatchDegree::Disjoint) continue;
    ranked.push_back({candidate.resourceId, candidate.capability.id, std::move(result)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedProvider& a, const RankedProvider& b) {
    return std::make_tuple(-rank(a.result.degree), std::cref(a.resourceId), std::cref(a.capabilityId)) <
           std::make_tuple(-rank(b.result.degree), std::cref(b.resourceId), std::cref(b.capabilityId));
  });
  return ranked;
}

std::vector<Candidate> all_candidates(const WorldModel& world) {
  std::vector<Candidate> out;
  for (const auto& r : world.resources) {
    for (const auto& c : r.providedCapabilities) out.push_back({r.id, c});
  }
  return out;
}

}  // namespace css
