#include "css/orchestrator.hpp"

#include <algorithm>
#include <set>

#include "css/capability_lang.hpp"
#include "css/units.hpp"

namespace css {

std::vector<const SkillDescriptor*> skills_for(const Resource& resource, const Capability& capability) {
  std::vector<const SkillDescriptor*> out;
  for (const auto& s : resource.skills) {
    if (s.capabilityRef == capability.iri) out.push_back(&s);
  }
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->skillId < b->skillId; });
  return out;
}

namespace {

const Capability* find_capability(const Resource& resource, const std::string& id) {
  for (const auto& c : resource.providedCapabilities) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

// Concrete step values must lie inside every provided feasible set they touch.
bool values_inside(const ProcessStep& step, const NormalForm& provided) {
  for (const auto& [prop, value] : step.parameterValues) {
    auto it = provided.feasible.find(prop);
    if (it != provided.feasible.end() && !it->second.contains(value)) return false;
  }
  return true;
}

}  // namespace

ParameterMap bind_parameters(const ProcessStep& step, const Capability& capability,
                             const SkillDescriptor& skill, const WorldModel& world) {
  ParameterMap out;
  for (const auto& [prop, value] : step.parameterValues) {
    auto mapped = capability.propertyToParameter.find(prop);
    const std::string& paramId = mapped == capability.propertyToParameter.end() ? prop : mapped->second;
    const ParameterSpec* param = skill.find_parameter(paramId);
    if (!param) {
      if (mapped == capability.propertyToParameter.end()) continue;
      throw Error(ErrorCode::UnknownParameter, "skill '" + skill.skillId + "' has no parameter '" +
                                                   paramId + "' (mapped from '" + prop + "')");
    }
    if (param->direction != Direction::Input) {
      throw Error(ErrorCode::NotWritable, "parameter '" + paramId + "' of skill '" + skill.skillId +
                                              "' is an output");
    }
    Literal bound = value;
    if (value.is_numeric()) {
      const PropertyDefinition* def = world.find_property(prop);
      std::optional<std::string> from = def ? def->unit : std::nullopt;
      if (from && param->unit && *from != *param->unit) {
        Decimal converted = convert_unit(value.number(), *from, *param->unit);
        bound = value.type() == Datatype::Integer && converted.is_integer() ? Literal::integer(converted)
                                                                           : Literal::real(converted);
      }
    }
    auto coerced = coerce(bound, param->datatype);
    if (!coerced) {
      throw Error(ErrorCode::TypeMismatch, "value " + bound.to_string() + " of '" + prop +
                                               "' does not fit " + std::string(to_string(param->datatype)) +
                                               " parameter '" + paramId + "'");
    }
    out.insert_or_assign(paramId, *coerced);
  }
  for (const auto& p : skill.parameters) {
    if (p.direction != Direction::Input || out.count(p.paramId)) continue;
    if (!p.defaultValue) {
      throw Error(ErrorCode::UnboundRequiredParameter,
                  "input '" + p.paramId + "' of skill '" + skill.skillId + "' has no value and no default");
    }
    out.emplace(p.paramId, *p.defaultValue);
  }
  return out;
}

ProductionPlan plan(const Product& product, const WorldModel& world) {
  ProductionPlan out{product.id, {}};
  const auto candidates = all_candidates(world);
  for (const auto& step : product.steps) {
    PlanEntry entry{step.id, {}};
    std::string last_problem;
    for (const auto& ranked : rank_providers(step.requiredCapability, candidates, world)) {
      const Resource* resource = world.find_resource(ranked.resourceId);
      const Capability* cap = resource ? find_capability(*resource, ranked.capabilityId) : nullptr;
      if (!cap || !values_inside(step, normalize(cap->expression, world))) continue;
      auto skills = skills_for(*resource, *cap);
      if (skills.empty()) continue;
      try {
        entry.choices.push_back({resource->id, cap->id, skills.front()->skillId, ranked.result.degree,
                                 bind_parameters(step, *cap, *skills.front(), world)});
      } catch (const Error& e) {
        last_problem = e.what();
      }
    }
    if (entry.choices.empty()) {
      std::string msg = "no provider qualifies for step '" + step.id + "'";
      if (!last_problem.empty()) msg += ": " + last_problem;
      throw Error(ErrorCode::NoMatchForStep, msg);
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

json plan_entry_to_json(const PlanEntry& entry) {
  auto choice_json = [](const PlanChoice& c) {
    return json{{"resourceId", c.resourceId},
                {"capabilityId", c.capabilityId},
                {"skillId", c.skillId},
                {"matchDegree", to_string(c.matchDegree)},
                {"parameterAssignment", parameters_to_json(c.parameterAssignment)}};
  };
  json j = choice_json(entry.chosen());
  j["stepId"] = entry.stepId;
  json alternatives = json::array();
  for (std::size_t i = 1; i < entry.choices.size(); ++i) alternatives.push_back(choice_json(entry.choices[i]));
  j["alternatives"] = alternatives;
  return j;
}

std::string export_plan(const ProductionPlan& plan) {
  std::string out;
  for (const auto& e : plan.entries) out += encode(make_result(e.stepId, plan_entry_to_json(e)));
  return out;
}

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::StateChange: return "stateChange";
    case RecordKind::ParamWrite: return "paramWrite";
    case RecordKind::Feasibility: return "feasibility";
    case RecordKind::OutputRead: return "outputRead";
    case RecordKind::Error: return "error";
  }
  return "error";
}

std::vector<State> ExecutionTrace::states_of(std::string_view stepId) const {
  std::vector<State> out;
  for (const auto& r : records) {
    if (r.stepId == stepId && r.kind == RecordKind::StateChange) {
      out.push_back(*parse_state(r.detail.at("newState").get<std::string>()));
    }
  }
  return out;
}

std::optional<std::string> ExecutionTrace::completed_on(std::string_view stepId) const {
  std::optional<std::string> out;
  for (const auto& r : records) {
    if (r.stepId == stepId && r.kind == RecordKind::StateChange &&
        r.detail.at("newState") == to_string(State::Complete)) {
      out = r.resourceId;
    }
  }
  return out;
}

std::string export_trace(const ExecutionTrace& trace) {
  std::string out;
  std::int64_t seq = 0;
  for (const auto& r : trace.records) {
    json payload{{"record", to_string(r.kind)},
                 {"timestamp", r.timestamp.to_string()},
                 {"resourceId", r.resourceId},
                 {"localRuntimeId", r.localRuntimeId},
                 {"detail", r.detail}};
    out += encode({MessageKind::Event, r.stepId, std::move(payload), ++seq});
  }
  return out;
}

namespace {

// Raised inside a single attempt; the runner moves on to the next choice.
struct AttemptFailed {
  std::string code;
  std::string message;
};

class Runner {
 public:
  Runner(const std::map<std::string, SkillClient*>& connections, const ExecuteOptions& options)
      : connections_(connections), options_(options), now_(options.startTime.millis) {}

  ExecutionResult run(const ProductionPlan& plan) {
    for (const auto& entry : plan.entries) {
      if (!connections_.count(entry.chosen().resourceId)) {
        throw Error(ErrorCode::InvalidArgument,
                    "no connection for resource '" + entry.chosen().resourceId + "'");
      }
    }
    for (const auto& entry : plan.entries) {
      if (!run_entry(entry)) {
        result_.failedStep = entry.stepId;
        break;
      }
    }
    return std::move(result_);
  }

 private:
  bool run_entry(const PlanEntry& entry) {
    std::vector<const PlanChoice*> usable;
    for (const auto& c : entry.choices) {
      if (connections_.count(c.resourceId)) usable.push_back(&c);
    }
    for (std::size_t i = 0; i < usable.size(); ++i) {
      const PlanChoice& choice = *usable[i];
      step_ = entry.stepId;
      resource_ = choice.resourceId;
      lrid_.clear();
      try {
        attempt(choice);
        return true;
      } catch (const AttemptFailed& f) {
        bool last = i + 1 == usable.size();
        json detail{{"code", last ? std::string(to_string(ErrorCode::StepFailedNoAlternative)) : f.code},
                    {"message", f.message},
                    {"action", last ? "halt" : "fallback"}};
        if (last) detail["cause"] = f.code;
        add(RecordKind::Error, std::move(detail));
      }
    }
    return false;
  }

  void attempt(const PlanChoice& choice) {
    SkillClient& client = *connections_.at(choice.resourceId);
    lrid_ = runtime_id(client, choice.skillId);
    auto& subscribed = subscribed_[choice.resourceId];
    State state;
    if (subscribed.insert(lrid_).second) {
      state = client.subscribe(lrid_);
    } else {
      state = *parse_state(client.read(lrid_).at("state").get<std::string>());
    }

    if (options_.useFeasibility) check_feasibility(client, choice);

    if (state == State::Aborted) {
      client.command(lrid_, Command::Clear);
      state = await(client, {State::Stopped});
    }
    if (state == State::Stopped || state == State::Complete) {
      client.command(lrid_, Command::Reset);
      state = await(client, {State::Idle});
    }
    if (state != State::Idle) {
      throw AttemptFailed{"WrongState", "skill " + lrid_ + " is " + std::string(to_string(state))};
    }

    client.write(lrid_, choice.parameterAssignment);
    add(RecordKind::ParamWrite, {{"values", parameters_to_json(choice.parameterAssignment)}});

    try {
      client.command(lrid_, Command::Start);
    } catch (const RemoteError& e) {
      if (!e.is(ErrorCode::PreconditionViolated)) throw;
      throw AttemptFailed{e.remote_code_name(), e.remote_message()};
    }
    state = await(client, {State::Complete, State::Aborted, State::Stopped});
    if (state != State::Complete) {
      json read = client.read(lrid_);
      std::string why = read.at("lastError").is_string() ? read.at("lastError").get<std::string>()
                                                          : "skill ended in " + std::string(to_string(state));
      throw AttemptFailed{std::string(to_string(state)), why};
    }

    json read = client.read(lrid_);
    add(RecordKind::OutputRead, {{"values", read.at("outputValues")}});
    client.command(lrid_, Command::Reset);
    await(client, {State::Idle});
  }

  std::string runtime_id(SkillClient& client, const std::string& skillId) {
    json listing = client.list_skills();
    for (const auto& s : listing.at("skills")) {
      if (s.at("skillId") == skillId) return s.at("localRuntimeId").get<std::string>();
    }
    throw AttemptFailed{"UnknownSkill", "resource '" + resource_ + "' does not host skill '" + skillId + "'"};
  }

  void check_feasibility(SkillClient& client, const PlanChoice& choice) {
    FeasibilityResult r;
    try {
      r = client.feasibility(lrid_, choice.parameterAssignment);
    } catch (const RemoteError& e) {
      if (e.is(ErrorCode::UnsupportedCheck)) return;
      throw;
    }
    json estimates = json::object();
    for (const auto& [k, v] : r.estimates) estimates[k] = v.to_string();
    json detail{{"feasible", r.feasible}, {"estimates", estimates}};
    detail["reason"] = r.reason ? json(*r.reason) : json(nullptr);
    add(RecordKind::Feasibility, std::move(detail));
    if (!r.feasible) throw AttemptFailed{"Infeasible", r.reason.value_or("feasibility check failed")};
  }

  // Consumes this skill's events until one enters a state from `targets`.
  State await(SkillClient& client, std::initializer_list<State> targets) {
    for (;;) {
      auto event = client.next_event(options_.stateTimeout);
      if (!event) {
        if (!client.connected()) throw Error(ErrorCode::ConnectionLost, "connection to '" + resource_ + "' lost");
        throw Error(ErrorCode::Timeout, "skill " + lrid_ + " on '" + resource_ + "' did not change state");
      }
      const json& p = event->payload;
      if (p.value("localRuntimeId", std::string()) != lrid_) continue;
      advance_clock(p.at("timeMs").get<std::int64_t>());
      State next = *parse_state(p.at("newState").get<std::string>());
      add(RecordKind::StateChange, {{"previousState", p.at("previousState")}, {"newState", p.at("newState")}});
      if (std::find(targets.begin(), targets.end(), next) != targets.end()) return next;
    }
  }

  // Hosts run independent clocks; the trace clock advances by each host's
  // own elapsed time so it stays monotonic.
  void advance_clock(std::int64_t hostTime) {
    auto [it, fresh] = host_time_.try_emplace(resource_, hostTime);
    if (!fresh) {
      now_ += std::max<std::int64_t>(0, hostTime - it->second);
      it->second = hostTime;
    }
  }

  void add(RecordKind kind, json detail) {
    result_.trace.records.push_back({Timestamp{now_}, step_, resource_, lrid_, kind, std::move(detail)});
  }

  const std::map<std::string, SkillClient*>& connections_;
  const ExecuteOptions& options_;
  std::int64_t now_;
  std::map<std::string, std::int64_t> host_time_;
  std::map<std::string, std::set<std::string>> subscribed_;
  std::string step_;
  std::string resource_;
  std::string lrid_;
  ExecutionResult result_;
};

}  // namespace

ExecutionResult execute_plan(const ProductionPlan& plan,
                             const std::map<std::string, SkillClient*>& connections,
                             const ExecuteOptions& options) {
  return Runner(connections, options).run(plan);
}

}  // namespace css
