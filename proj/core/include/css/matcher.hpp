#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "css/capability_lang.hpp"

namespace css {

enum class MatchDegree { Exact, Plugin, Subsume, Intersect, Disjoint };

std::string_view to_string(MatchDegree degree);
std::optional<MatchDegree> parse_match_degree(std::string_view text);
/// Larger is better: EXACT 4 ... DISJOINT 0.
int rank(MatchDegree degree);

struct PropertyComparison {
  FeasibleSet required;
  FeasibleSet provided;
  FeasibleSet intersection;

  friend bool operator==(const PropertyComparison&, const PropertyComparison&) = default;
};

struct MatchResult {
  MatchDegree degree = MatchDegree::Disjoint;
  /// Values (in property units) satisfying both sides; absent iff DISJOINT.
  std::optional<ParameterMap> witness;
  std::map<std::string, PropertyComparison> perProperty;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Outcome of conjoining two normal forms: either the intersected form with
/// the more specific class, or a class-level disjointness marker.
struct Conjunction {
  bool disjointClass = false;
  NormalForm form;
};

/// Class exists and every feasible set is non-empty.
bool satisfiable(const NormalForm& nf, const Taxonomy& taxonomy);

Conjunction conjoin(const NormalForm& required, const NormalForm& provided,
                    const Taxonomy& taxonomy);

/// Intersects every constrained property with its declared range, when the
/// world declares one. Matching compares sets within these domains.
NormalForm restrict_to_domain(const NormalForm& nf, const WorldModel& world);

/// Closed-world satisfiability match. Throws the first validation problem of
/// either expression.
MatchResult match_capabilities(const CapabilityExpression& required,
                               const CapabilityExpression& provided, const WorldModel& world);

MatchResult match_normal_forms(const NormalForm& required, const NormalForm& provided,
                               const WorldModel& world);

struct Candidate {
  std::string resourceId;
  Capability capability;
};

struct RankedProvider {
  std::string resourceId;
  std::string capabilityId;
  MatchResult result;
};

/// Candidates with degree >= INTERSECT, best degree first, ties by
/// resourceId then capabilityId.
std::vector<RankedProvider> rank_providers(const CapabilityExpression& required,
                                           const std::vector<Candidate>& candidates,
                                           const WorldModel& world);

/// Every provided capability in the world as a candidate list.
std::vector<Candidate> all_candidates(const WorldModel& world);

}  // namespace css
