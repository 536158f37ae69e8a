#include <sstream>

#include "css/error.hpp"
#include "css/skill_runtime.hpp"
#include "css/units.hpp"

namespace css {
namespace {

class SimulatedBehavior final : public SkillBehavior {
 public:
  SimulatedBehavior(SimulationSpec spec, SkillDescriptor descriptor, std::chrono::milliseconds tick)
      : spec_(std::move(spec)), descriptor_(std::move(descriptor)), tick_(tick) {}

  void begin(const ParameterMap& /*inputs*/) override { remaining_ = spec_.executeTicks; }

  ExecutionStep execute(ExecutionContext& context) override {
    if (auto violation = limit_violation(context.inputs())) return ExecutionStep::failed(*violation);
    --remaining_;
    if (spec_.failDuringExecute && remaining_ <= spec_.executeTicks / 2) {
      return ExecutionStep::failed(*spec_.failDuringExecute);
    }
    if (remaining_ > 0) return ExecutionStep::running();
    for (const auto& [output, input] : spec_.outputs) {
      auto it = context.inputs().find(input);
      if (it == context.inputs().end()) continue;
      context.set_output(output, converted(input, output, it->second));
    }
    return ExecutionStep::done();
  }

  FeasibilityResult feasibility(const ParameterMap& inputs) override {
    if (spec_.forceInfeasible) return {false, "resource rejected the request", {}};
    if (auto violation = limit_violation(inputs)) return {false, violation, {}};
    FeasibilityResult ok;
    ok.estimates.emplace("durationSeconds",
                         Decimal::from_int(spec_.executeTicks).mul_ratio(tick_.count(), 1000));
    return ok;
  }

  std::optional<std::string> precondition(const ParameterMap& /*inputs*/) override {
    return spec_.preconditionViolation;
  }

 private:
  std::optional<std::string> limit_violation(const ParameterMap& inputs) const {
    for (const auto& limit : spec_.limits) {
      auto it = inputs.find(limit.paramId);
      if (it == inputs.end()) return "parameter '" + limit.paramId + "' is not set";
      const Decimal& v = it->second.number();
      if (limit.max && v > *limit.max) {
        return limit.paramId + " " + v.to_string() + " exceeds limit " + limit.max->to_string();
      }
      if (limit.min && v < *limit.min) {
        return limit.paramId + " " + v.to_string() + " is below limit " + limit.min->to_string();
      }
    }
    return std::nullopt;
  }

  Literal converted(const std::string& from, const std::string& to, const Literal& value) const {
    const ParameterSpec* src = descriptor_.find_parameter(from);
    const ParameterSpec* dst = descriptor_.find_parameter(to);
    if (src && dst && value.is_numeric() && src->unit && dst->unit) {
      return Literal::real(convert_unit(value.number(), *src->unit, *dst->unit));
    }
    return value;
  }

  SimulationSpec spec_;
  SkillDescriptor descriptor_;
  std::chrono::milliseconds tick_;
  int remaining_ = 0;
};

}  // namespace

std::unique_ptr<SkillBehavior> make_simulated_behavior(const SimulationSpec& spec,
                                                       const SkillDescriptor& descriptor,
                                                       std::chrono::milliseconds tick) {
  return std::make_unique<SimulatedBehavior>(spec, descriptor, tick);
}

std::vector<std::string> host_resource(SkillHost& host, const Resource& resource) {
  std::vector<std::string> ids;
  for (const auto& skill : resource.skills) {
    auto sim = resource.simulations.find(skill.skillId);
    const SimulationSpec spec = sim == resource.simulations.end() ? SimulationSpec{} : sim->second;
    ids.push_back(host.register_skill(skill, make_simulated_behavior(spec, skill, host.tick())));
  }
  return ids;
}

}  // namespace css
