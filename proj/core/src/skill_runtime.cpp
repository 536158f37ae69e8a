#include "css/skill_runtime.hpp"

#include <algorithm>
#include <cstdio>

#include "css/error.hpp"

namespace css {
namespace {

Literal checked_value(const ParameterSpec& spec, const Literal& value) {
  auto coerced = coerce(value, spec.datatype);
  if (!coerced) {
    throw Error(ErrorCode::TypeMismatch, "parameter '" + spec.paramId + "' expects " +
                                             std::string(to_string(spec.datatype)) + ", got '" +
                                             value.to_string() + "'");
  }
  if (spec.datatype == Datatype::Enum && !spec.enumValues.empty() &&
      std::find(spec.enumValues.begin(), spec.enumValues.end(), coerced->symbol()) ==
          spec.enumValues.end()) {
    throw Error(ErrorCode::TypeMismatch,
                "'" + coerced->symbol() + "' is not a value of parameter '" + spec.paramId + "'");
  }
  return *coerced;
}

}  // namespace

std::int64_t SystemClock::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void SystemClock::advance(std::chrono::milliseconds duration) {
  std::this_thread::sleep_for(duration);
}

void ExecutionContext::set_output(const std::string& paramId, const Literal& value) {
  const ParameterSpec* spec = descriptor_.find_parameter(paramId);
  if (!spec || spec->direction != Direction::Output) {
    throw Error(ErrorCode::UnknownParameter, "'" + paramId + "' is not an output parameter");
  }
  outputs_.insert_or_assign(paramId, checked_value(*spec, value));
}

SkillHost::SkillHost(std::string name, std::shared_ptr<Clock> clock, PumpMode mode,
                     std::chrono::milliseconds tick)
    : name_(std::move(name)), clock_(std::move(clock)), mode_(mode), tick_(tick) {
  if (mode_ == PumpMode::Background) pump_ = std::thread([this] { pump_loop(); });
}

SkillHost::~SkillHost() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (pump_.joinable()) pump_.join();
}

std::string SkillHost::register_skill(SkillDescriptor descriptor,
                                      std::unique_ptr<SkillBehavior> behavior) {
  auto problems = descriptor_problems(descriptor);
  if (!behavior) problems.push_back("no behavior supplied");
  if (!problems.empty()) {
    throw Error(ErrorCode::DescriptorInvalid,
                "skill '" + descriptor.skillId + "': " + problems.front());
  }
  std::lock_guard lock(mutex_);
  if (by_skill_id_.count(descriptor.skillId)) {
    throw Error(ErrorCode::DuplicateSkillId,
                "skill '" + descriptor.skillId + "' is already registered");
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "lr-%04llu",
                static_cast<unsigned long long>(next_runtime_id_++));
  Instance inst;
  inst.localRuntimeId = buf;
  for (const auto& p : descriptor.parameters) {
    if (p.direction == Direction::Input && p.defaultValue) {
      inst.inputs.emplace(p.paramId, checked_value(p, *p.defaultValue));
    }
  }
  inst.descriptor = std::move(descriptor);
  inst.behavior = std::move(behavior);
  by_skill_id_.emplace(inst.descriptor.skillId, inst.localRuntimeId);
  std::string id = inst.localRuntimeId;
  instances_.emplace(id, std::move(inst));
  return id;
}

SkillHost::Instance& SkillHost::instance(const std::string& id) {
  auto it = instances_.find(id);
  if (it == instances_.end()) throw Error(ErrorCode::UnknownSkill, "unknown skill '" + id + "'");
  return it->second;
}

const SkillHost::Instance& SkillHost::instance(const std::string& id) const {
  auto it = instances_.find(id);
  if (it == instances_.end()) throw Error(ErrorCode::UnknownSkill, "unknown skill '" + id + "'");
  return it->second;
}

void SkillHost::transition(Instance& inst, State next) {
  State previous = inst.state;
  inst.state = next;
  if (next == State::Starting) {
    inst.outputs.clear();
    inst.lastError.reset();
    inst.executeTicks = 0;
  }
  if (previous == State::Starting && next == State::Execute) inst.behavior->begin(inst.inputs);
  if (previous == State::Execute && (next == State::Stopping || next == State::Aborting)) {
    inst.behavior->cancel();
  }
  SkillEvent event{inst.localRuntimeId, previous, next, ++inst.seq, clock_->now_ms()};
  for (const auto& [id, sub] : subscriptions_) {
    if (sub.localRuntimeId == inst.localRuntimeId) sub.listener(event);
  }
}

State SkillHost::fire_command(const std::string& id, Command command) {
  State result;
  {
    std::lock_guard lock(mutex_);
    Instance& inst = instance(id);
    auto next = next_state(inst.state, command);
    if (!next) {
      throw Error(ErrorCode::InvalidTransition, "command " + std::string(to_string(command)) +
                                                    " is not allowed in state " +
                                                    std::string(to_string(inst.state)));
    }
    if (command == Command::Start && inst.descriptor.hasPreconditionCheck) {
      if (auto violation = inst.behavior->precondition(inst.inputs)) {
        inst.lastError = "precondition violated: " + *violation;
        throw Error(ErrorCode::PreconditionViolated, *inst.lastError);
      }
    }
    transition(inst, *next);
    result = inst.state;
  }
  wake_.notify_all();
  return result;
}

ParameterMap SkillHost::checked_inputs(const Instance& inst, const ParameterMap& values) const {
  ParameterMap out;
  for (const auto& [param, value] : values) {
    if (param == kLocalRuntimeIdName) {
      throw Error(ErrorCode::NotWritable, "LocalRuntimeID is read-only");
    }
    const ParameterSpec* spec = inst.descriptor.find_parameter(param);
    if (!spec) {
      throw Error(ErrorCode::UnknownParameter, "skill '" + inst.descriptor.skillId +
                                                   "' has no parameter '" + param + "'");
    }
    if (spec->direction != Direction::Input) {
      throw Error(ErrorCode::NotWritable, "parameter '" + param + "' is an output");
    }
    out.emplace(param, checked_value(*spec, value));
  }
  return out;
}

void SkillHost::write_parameters(const std::string& id, const ParameterMap& values) {
  std::lock_guard lock(mutex_);
  Instance& inst = instance(id);
  if (inst.state != State::Idle && inst.state != State::Stopped) {
    throw Error(ErrorCode::WrongState, "parameters can only be written in Idle or Stopped, skill '" +
                                           id + "' is " + std::string(to_string(inst.state)));
  }
  for (auto& [param, value] : checked_inputs(inst, values)) {
    inst.inputs.insert_or_assign(param, std::move(value));
  }
}

SkillSnapshot SkillHost::snapshot(const Instance& inst) const {
  return {inst.localRuntimeId, inst.descriptor, inst.state, inst.inputs,
          inst.outputs,        inst.lastError,  inst.seq};
}

SkillSnapshot SkillHost::read_skill(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return snapshot(instance(id));
}

std::vector<SkillSnapshot> SkillHost::list_skills() const {
  std::lock_guard lock(mutex_);
  std::vector<SkillSnapshot> out;
  for (const auto& [id, inst] : instances_) out.push_back(snapshot(inst));
  return out;
}

std::string SkillHost::runtime_id_of(const std::string& skillId) const {
  std::lock_guard lock(mutex_);
  auto it = by_skill_id_.find(skillId);
  if (it == by_skill_id_.end()) {
    throw Error(ErrorCode::UnknownSkill, "unknown skill id '" + skillId + "'");
  }
  return it->second;
}

FeasibilityResult SkillHost::check_feasibility(const std::string& id, const ParameterMap& inputs) {
  std::lock_guard lock(mutex_);
  Instance& inst = instance(id);
  if (!inst.descriptor.hasFeasibilityCheck) {
    throw Error(ErrorCode::UnsupportedCheck,
                "skill '" + inst.descriptor.skillId + "' has no feasibility check");
  }
  ParameterMap merged = inst.inputs;
  for (auto& [param, value] : checked_inputs(inst, inputs)) merged.insert_or_assign(param, value);
  FeasibilityResult result = inst.behavior->feasibility(merged);
  if (!result.feasible && !result.reason) result.reason = "skill reported infeasible";
  return result;
}

std::uint64_t SkillHost::subscribe(const std::string& id, Listener listener) {
  std::lock_guard lock(mutex_);
  instance(id);
  std::uint64_t sub = next_subscription_++;
  subscriptions_.emplace(sub, Subscription{id, std::move(listener)});
  return sub;
}

void SkillHost::unsubscribe(std::uint64_t subscriptionId) {
  std::lock_guard lock(mutex_);
  subscriptions_.erase(subscriptionId);
}

void SkillHost::step(Instance& inst) {
  if (inst.state != State::Execute) {
    transition(inst, *completion_target(inst.state));
    return;
  }
  ExecutionContext context(inst.descriptor, inst.inputs, inst.outputs, inst.executeTicks,
                           clock_->now_ms());
  ExecutionStep result;
  try {
    result = inst.behavior->execute(context);
  } catch (const std::exception& e) {
    result = ExecutionStep::failed(e.what());
  }
  ++inst.executeTicks;
  switch (result.status) {
    case ExecutionStep::Status::Running: break;
    case ExecutionStep::Status::Done: transition(inst, State::Completing); break;
    case ExecutionStep::Status::Failed:
      inst.lastError = result.error.empty() ? "execution failed" : result.error;
      inst.behavior->cancel();
      transition(inst, State::Aborting);
      break;
  }
}

bool SkillHost::any_acting() const {
  return std::any_of(instances_.begin(), instances_.end(),
                     [](const auto& entry) { return is_acting(entry.second.state); });
}

bool SkillHost::pump_once() {
  {
    std::lock_guard lock(mutex_);
    if (!any_acting()) return false;
  }
  clock_->advance(tick_);
  std::lock_guard lock(mutex_);
  for (auto& [id, inst] : instances_) {
    if (is_acting(inst.state)) step(inst);
  }
  return any_acting();
}

void SkillHost::run_until_quiescent(std::size_t max_ticks) {
  for (std::size_t i = 0; i < max_ticks && pump_once(); ++i) {
  }
}

void SkillHost::pump_loop() {
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [this] { return stopping_ || any_acting(); });
      if (stopping_) return;
    }
    pump_once();
  }
}

}  // namespace css
