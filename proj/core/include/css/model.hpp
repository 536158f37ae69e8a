#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "css/decimal.hpp"
#include "css/expression.hpp"
#include "css/literal.hpp"
#include "css/taxonomy.hpp"
#include "css/timestamp.hpp"

namespace css {

/// Closed range a property may take in this world.
struct DeclaredRange {
  Decimal lower;
  Decimal upper;

  friend bool operator==(const DeclaredRange&, const DeclaredRange&) = default;
};

struct PropertyDefinition {
  std::string id;
  Datatype datatype = Datatype::Integer;
  std::optional<std::string> unit;
  std::vector<std::string> enumValues;
  std::optional<DeclaredRange> declaredRange;

  friend bool operator==(const PropertyDefinition&, const PropertyDefinition&) = default;
};

struct Capability {
  std::string id;
  std::string iri;
  CapabilityExpression expression;
  /// property id -> skill parameter id; absent entries bind by equal name.
  std::map<std::string, std::string> propertyToParameter;

  friend bool operator==(const Capability&, const Capability&) = default;
};

enum class Direction { Input, Output };

std::string_view to_string(Direction direction);

struct ParameterSpec {
  std::string paramId;
  Direction direction = Direction::Input;
  Datatype datatype = Datatype::Real;
  std::optional<std::string> unit;
  std::optional<Literal> defaultValue;
  std::vector<std::string> enumValues;

  friend bool operator==(const ParameterSpec&, const ParameterSpec&) = default;
};

inline constexpr std::string_view kStateMachineProfile = "PACKML-17";
inline constexpr std::string_view kLocalRuntimeIdName = "LocalRuntimeID";

/// Skill metamodel: capability reference (the ontology URL), parameter set,
/// state machine profile and optional checks.
struct SkillDescriptor {
  std::string skillId;
  std::optional<std::string> name;
  std::string capabilityRef;
  std::vector<ParameterSpec> parameters;
  bool hasFeasibilityCheck = false;
  bool hasPreconditionCheck = false;
  std::string stateMachineProfile{kStateMachineProfile};

  const ParameterSpec* find_parameter(std::string_view id) const;

  friend bool operator==(const SkillDescriptor&, const SkillDescriptor&) = default;
};

/// Inclusive bounds on an input parameter, checked by the simulated
/// feasibility check and again at execution.
struct ParameterLimit {
  std::string paramId;
  std::optional<Decimal> min;
  std::optional<Decimal> max;

  friend bool operator==(const ParameterLimit&, const ParameterLimit&) = default;
};

/// Behavior of a simulated skill as configured in a world document.
struct SimulationSpec {
  int executeTicks = 3;
  std::vector<ParameterLimit> limits;
  /// output param -> input param copied at completion
  std::map<std::string, std::string> outputs;
  bool forceInfeasible = false;
  std::optional<std::string> failDuringExecute;
  std::optional<std::string> preconditionViolation;

  friend bool operator==(const SimulationSpec&, const SimulationSpec&) = default;
};

struct Resource {
  std::string id;
  std::vector<Capability> providedCapabilities;
  std::vector<SkillDescriptor> skills;
  /// skill id -> simulated behavior; only used by hosts that simulate.
  std::map<std::string, SimulationSpec> simulations;

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct ProcessStep {
  std::string id;
  CapabilityExpression requiredCapability;
  /// property id -> value in the property's declared unit
  ParameterMap parameterValues;

  friend bool operator==(const ProcessStep&, const ProcessStep&) = default;
};

struct Product {
  std::string id;
  std::vector<ProcessStep> steps;

  friend bool operator==(const Product&, const Product&) = default;
};

// Commercial layer.

struct TenderCriteria {
  std::int64_t quantity = 1;
  Decimal maxUnitPrice;
  Decimal maxCo2PerUnit;
  Timestamp deliveryDeadline;
  std::set<std::string> requiredCertifications;
  bool ndaRequired = false;

  friend bool operator==(const TenderCriteria&, const TenderCriteria&) = default;
};

struct RequiredCapability {
  std::string capKey;
  CapabilityExpression expression;

  friend bool operator==(const RequiredCapability&, const RequiredCapability&) = default;
};

struct ServiceRequest {
  std::string requestId;
  std::vector<RequiredCapability> requiredCapabilities;
  TenderCriteria tender;
  Timestamp submittedAt;
  Timestamp responseDeadline;

  const RequiredCapability* find(std::string_view capKey) const;

  friend bool operator==(const ServiceRequest&, const ServiceRequest&) = default;
};

struct ServiceOffer {
  std::string offerId;
  std::string providerId;
  std::string requestId;
  std::vector<std::string> coveredCapKeys;
  std::map<std::string, CapabilityExpression> providedCapabilities;
  Decimal unitPrice;
  Decimal co2PerUnit;
  Timestamp deliveryDate;
  std::set<std::string> certifications;
  bool ndaAccepted = false;
  Timestamp validUntil;
  std::optional<std::string> exclusiveGroup;

  friend bool operator==(const ServiceOffer&, const ServiceOffer&) = default;
};

struct Contract {
  std::string contractId;
  std::string requestId;
  std::vector<std::string> acceptedOfferIds;
  Decimal totalPrice;
  Timestamp formedAt;

  friend bool operator==(const Contract&, const Contract&) = default;
};

struct WorldModel {
  Taxonomy taxonomy;
  std::vector<PropertyDefinition> propertyDefs;
  std::vector<Resource> resources;
  std::vector<Product> products;
  std::vector<ServiceOffer> serviceCatalog;

  const PropertyDefinition* find_property(std::string_view id) const;
  const Resource* find_resource(std::string_view id) const;
  const Product* find_product(std::string_view id) const;

  friend bool operator==(const WorldModel&, const WorldModel&) = default;
};

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

struct Issue {
  Severity severity = Severity::Error;
  std::string path;
  std::string message;

  friend bool operator==(const Issue&, const Issue&) = default;
};

using ValidationReport = std::vector<Issue>;

/// Checks every referential, uniqueness and typing invariant of the model.
/// Problems are reported, never thrown; the report is sorted by path.
ValidationReport validate_model(const WorldModel& world);

inline bool has_errors(const ValidationReport& report) {
  for (const auto& issue : report) {
    if (issue.severity == Severity::Error) return true;
  }
  return false;
}

/// Self-contained descriptor defects (empty capabilityRef, duplicate or
/// reserved parameter ids, bad defaults, unknown profile).
std::vector<std::string> descriptor_problems(const SkillDescriptor& descriptor);

/// First capability in model order whose iri matches. Throws NotFound.
const Capability& resolve_capability(const WorldModel& world, std::string_view iri);

}  // namespace css
