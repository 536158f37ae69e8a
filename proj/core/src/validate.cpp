#include <algorithm>
#include <map>
#include <set>

#include "css/capability_lang.hpp"
#include "css/model.hpp"
#include "css/units.hpp"

namespace css {
namespace {

class Collector {
 public:
  void error(std::string path, std::string message) {
    issues_.push_back({Severity::Error, std::move(path), std::move(message)});
  }
  void warning(std::string path, std::string message) {
    issues_.push_back({Severity::Warning, std::move(path), std::move(message)});
  }
  ValidationReport finish() {
    std::stable_sort(issues_.begin(), issues_.end(),
                     [](const Issue& a, const Issue& b) { return a.path < b.path; });
    return std::move(issues_);
  }

 private:
  ValidationReport issues_;
};

bool literal_fits(const Literal& value, Datatype type, const std::vector<std::string>& enums) {
  auto coerced = coerce(value, type);
  if (!coerced) return false;
  if (type == Datatype::Enum && !enums.empty()) {
    return std::find(enums.begin(), enums.end(), coerced->symbol()) != enums.end();
  }
  return true;
}

void check_expression_into(Collector& out, const std::string& path,
                           const CapabilityExpression& expr, const WorldModel& world) {
  for (const auto& problem : check_expression(expr, world)) {
    out.error(path, std::string(to_string(problem.code)) + ": " + problem.message);
  }
}

void check_properties(Collector& out, const WorldModel& world) {
  std::set<std::string> ids;
  for (const auto& def : world.propertyDefs) {
    std::string path = "properties[" + def.id + "]";
    if (def.id.empty()) out.error(path, "property with empty id");
    if (!ids.insert(def.id).second) out.error(path, "duplicate property id '" + def.id + "'");
    bool is_enum = def.datatype == Datatype::Enum;
    if (is_enum && def.enumValues.empty()) out.error(path, "enum property without enumValues");
    if (!is_enum && !def.enumValues.empty()) {
      out.error(path, "enumValues given for non-enum property");
    }
    if (def.unit && !find_unit(*def.unit)) out.error(path, "unknown unit '" + *def.unit + "'");
    if (def.unit && !is_numeric(def.datatype)) out.error(path, "unit on non-numeric property");
    if (def.declaredRange) {
      if (!is_numeric(def.datatype)) out.error(path, "declaredRange on non-numeric property");
      if (def.declaredRange->lower > def.declaredRange->upper) {
        out.error(path, "declaredRange lower bound exceeds upper bound");
      }
    }
  }
}

}  // namespace

std::vector<std::string> descriptor_problems(const SkillDescriptor& d) {
  std::vector<std::string> problems;
  if (d.skillId.empty()) problems.push_back("skillId is empty");
  if (d.capabilityRef.empty()) problems.push_back("capabilityRef (ontology URL) must be specified");
  if (d.stateMachineProfile != kStateMachineProfile) {
    problems.push_back("unsupported state machine profile '" + d.stateMachineProfile + "'");
  }
  std::set<std::string> ids;
  for (const auto& p : d.parameters) {
    if (p.paramId.empty()) problems.push_back("parameter with empty id");
    if (p.paramId == kLocalRuntimeIdName) {
      problems.push_back("LocalRuntimeID is runtime metadata, not a parameter");
    }
    if (!ids.insert(p.paramId).second) problems.push_back("duplicate parameter '" + p.paramId + "'");
    if (p.unit && !find_unit(*p.unit)) {
      problems.push_back("parameter '" + p.paramId + "' has unknown unit '" + *p.unit + "'");
    }
    if (p.datatype == Datatype::Enum && p.enumValues.empty()) {
      problems.push_back("enum parameter '" + p.paramId + "' without enumValues");
    }
    if (p.defaultValue && !literal_fits(*p.defaultValue, p.datatype, p.enumValues)) {
      problems.push_back("default of parameter '" + p.paramId + "' does not match its datatype");
    }
  }
  return problems;
}

ValidationReport validate_model(const WorldModel& world) {
  Collector out;
  for (const auto& problem : world.taxonomy.structural_problems()) out.error("taxonomy", problem);
  check_properties(out, world);

  std::set<std::string> resource_ids, capability_ids, skill_ids;
  std::map<std::string, std::string> iri_owner;
  std::set<std::string> all_iris;
  for (const auto& r : world.resources) {
    for (const auto& c : r.providedCapabilities) all_iris.insert(c.iri);
  }

  for (const auto& r : world.resources) {
    std::string rpath = "resources[" + r.id + "]";
    if (r.id.empty()) out.error(rpath, "resource with empty id");
    if (!resource_ids.insert(r.id).second) out.error(rpath, "duplicate resource id '" + r.id + "'");

    for (const auto& c : r.providedCapabilities) {
      std::string cpath = rpath + ".capabilities[" + c.id + "]";
      if (!capability_ids.insert(c.id).second) {
        out.error(cpath, "duplicate capability id '" + c.id + "'");
      }
      if (c.iri.empty()) {
        out.error(cpath + ".iri", "capability iri is empty");
      } else if (auto [it, fresh] = iri_owner.emplace(c.iri, c.id); !fresh) {
        out.error(cpath + ".iri", "iri '" + c.iri + "' is also used by capability '" + it->second +
                                      "'; lookups resolve to the first");
      }
      check_expression_into(out, cpath + ".expression", c.expression, world);
      for (const auto& [prop, param] : c.propertyToParameter) {
        if (!world.find_property(prop)) {
          out.error(cpath + ".propertyToParameter[" + prop + "]",
                    "unknown property '" + prop + "'");
        }
        if (param.empty()) {
          out.error(cpath + ".propertyToParameter[" + prop + "]", "empty parameter id");
        }
      }
    }

    for (const auto& s : r.skills) {
      std::string spath = rpath + ".skills[" + s.skillId + "]";
      if (!skill_ids.insert(s.skillId).second) {
        out.error(spath, "duplicate skill id '" + s.skillId + "'");
      }
      for (const auto& problem : descriptor_problems(s)) out.error(spath, problem);
      if (!s.capabilityRef.empty() && !all_iris.count(s.capabilityRef)) {
        out.error(spath + ".capabilityRef",
                  "dangling capability reference '" + s.capabilityRef + "'");
      }
    }
    for (const auto& [skill_id, sim] : r.simulations) {
      std::string path = rpath + ".simulations[" + skill_id + "]";
      auto it = std::find_if(r.skills.begin(), r.skills.end(),
                             [&](const SkillDescriptor& s) { return s.skillId == skill_id; });
      if (it == r.skills.end()) {
        out.error(path, "simulation for unknown skill '" + skill_id + "'");
        continue;
      }
      if (sim.executeTicks < 1) out.error(path, "executeTicks must be at least 1");
      for (const auto& limit : sim.limits) {
        if (!it->find_parameter(limit.paramId)) {
          out.error(path, "limit on unknown parameter '" + limit.paramId + "'");
        }
      }
      for (const auto& [output, input] : sim.outputs) {
        const ParameterSpec* o = it->find_parameter(output);
        if (!o || o->direction != Direction::Output) {
          out.error(path, "'" + output + "' is not an output parameter");
        }
        if (!it->find_parameter(input)) out.error(path, "unknown source parameter '" + input + "'");
      }
    }
  }

  std::set<std::string> product_ids;
  for (const auto& p : world.products) {
    std::string ppath = "products[" + p.id + "]";
    if (!product_ids.insert(p.id).second) out.error(ppath, "duplicate product id '" + p.id + "'");
    if (p.steps.empty()) out.warning(ppath, "product has no steps and cannot be orchestrated");
    std::set<std::string> step_ids;
    for (const auto& step : p.steps) {
      std::string stpath = ppath + ".steps[" + step.id + "]";
      if (!step_ids.insert(step.id).second) out.error(stpath, "duplicate step id '" + step.id + "'");
      auto problems = check_expression(step.requiredCapability, world);
      check_expression_into(out, stpath + ".requiredCapability", step.requiredCapability, world);
      bool values_ok = true;
      for (const auto& [prop, value] : step.parameterValues) {
        const PropertyDefinition* def = world.find_property(prop);
        if (!def) {
          out.error(stpath + ".parameterValues[" + prop + "]", "unknown property '" + prop + "'");
          values_ok = false;
        } else if (!literal_fits(value, def->datatype, def->enumValues)) {
          out.error(stpath + ".parameterValues[" + prop + "]",
                    "value '" + value.to_string() + "' is not a valid " +
                        std::string(to_string(def->datatype)));
          values_ok = false;
        }
      }
      if (problems.empty() && values_ok) {
        CapabilityExpression assigned{step.requiredCapability.classId, {}};
        for (const auto& atom : step.requiredCapability.constraints) {
          if (step.parameterValues.count(atom.propertyId)) assigned.constraints.push_back(atom);
        }
        ParameterMap typed;
        for (const auto& [prop, value] : step.parameterValues) {
          typed.emplace(prop, *coerce(value, world.find_property(prop)->datatype));
        }
        if (!evaluate_atoms(assigned, typed, world)) {
          out.error(stpath + ".parameterValues",
                    "parameter values violate the step's required capability");
        }
      }
    }
  }

  std::set<std::string> offer_ids;
  for (const auto& offer : world.serviceCatalog) {
    std::string opath = "serviceCatalog[" + offer.offerId + "]";
    if (!offer_ids.insert(offer.offerId).second) {
      out.error(opath, "duplicate offer id '" + offer.offerId + "'");
    }
    if (offer.coveredCapKeys.empty()) out.error(opath, "offer covers no capability keys");
    for (const auto& [key, expr] : offer.providedCapabilities) {
      check_expression_into(out, opath + ".providedCapabilities[" + key + "]", expr, world);
    }
  }
  return out.finish();
}

}  // namespace css
