#include "css/model.hpp"

#include "css/error.hpp"

namespace css {

std::string_view to_string(Direction direction) {
  return direction == Direction::Input ? "input" : "output";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

const ParameterSpec* SkillDescriptor::find_parameter(std::string_view id) const {
  for (const auto& p : parameters) {
    if (p.paramId == id) return &p;
  }
  return nullptr;
}

const RequiredCapability* ServiceRequest::find(std::string_view capKey) const {
  for (const auto& rc : requiredCapabilities) {
    if (rc.capKey == capKey) return &rc;
  }
  return nullptr;
}

const PropertyDefinition* WorldModel::find_property(std::string_view id) const {
  for (const auto& def : propertyDefs) {
    if (def.id == id) return &def;
  }
  return nullptr;
}

const Resource* WorldModel::find_resource(std::string_view id) const {
  for (const auto& r : resources) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const Product* WorldModel::find_product(std::string_view id) const {
  for (const auto& p : products) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Capability& resolve_capability(const WorldModel& world, std::string_view iri) {
  for (const auto& resource : world.resources) {
    for (const auto& cap : resource.providedCapabilities) {
      if (cap.iri == iri) return cap;
    }
  }
  throw Error(ErrorCode::NotFound, "no capability with iri '" + std::string(iri) + "'");
}

}  // namespace css
