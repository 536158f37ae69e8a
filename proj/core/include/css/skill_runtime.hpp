#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "css/model.hpp"
#include "css/state_machine.hpp"

namespace css {

/// Time source for skill hosts. Simulated clocks make runs instant and
/// reproducible; the real clock sleeps.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() const = 0;
  /// Lets `duration` pass.
  virtual void advance(std::chrono::milliseconds duration) = 0;
};

class SimulatedClock final : public Clock {
 public:
  explicit SimulatedClock(std::int64_t start_ms = 0) : now_(start_ms) {}
  std::int64_t now_ms() const override { return now_.load(); }
  void advance(std::chrono::milliseconds duration) override { now_ += duration.count(); }

 private:
  std::atomic<std::int64_t> now_;
};

class SystemClock final : public Clock {
 public:
  std::int64_t now_ms() const override;
  void advance(std::chrono::milliseconds duration) override;
};

struct FeasibilityResult {
  bool feasible = true;
  std::optional<std::string> reason;
  std::map<std::string, Decimal> estimates;

  friend bool operator==(const FeasibilityResult&, const FeasibilityResult&) = default;
};

struct ExecutionStep {
  enum class Status { Running, Done, Failed };
  Status status = Status::Running;
  std::string error;

  static ExecutionStep running() { return {Status::Running, {}}; }
  static ExecutionStep done() { return {Status::Done, {}}; }
  static ExecutionStep failed(std::string why) { return {Status::Failed, std::move(why)}; }
};

/// What a behavior sees during one Execute tick.
class ExecutionContext {
 public:
  ExecutionContext(const SkillDescriptor& descriptor, const ParameterMap& inputs,
                   ParameterMap& outputs, std::int64_t tick, std::int64_t now_ms)
      : descriptor_(descriptor), inputs_(inputs), outputs_(outputs), tick_(tick), now_ms_(now_ms) {}

  const ParameterMap& inputs() const noexcept { return inputs_; }
  /// Publishes an output value; visible to readers immediately. Throws
  /// UnknownParameter or TypeMismatch for non-output ids or wrong types.
  void set_output(const std::string& paramId, const Literal& value);
  /// Number of Execute ticks completed before this one.
  std::int64_t tick() const noexcept { return tick_; }
  std::int64_t now_ms() const noexcept { return now_ms_; }

 private:
  const SkillDescriptor& descriptor_;
  const ParameterMap& inputs_;
  ParameterMap& outputs_;
  std::int64_t tick_;
  std::int64_t now_ms_;
};

/// Implementation of a skill. execute() is called once per host tick while
/// the instance is in Execute; it must not block.
class SkillBehavior {
 public:
  virtual ~SkillBehavior() = default;
  /// Called when Starting completes, before the first execute().
  virtual void begin(const ParameterMap& /*inputs*/) {}
  virtual ExecutionStep execute(ExecutionContext& context) = 0;
  /// Called when Execute is left through Stop or Abort.
  virtual void cancel() {}
  virtual FeasibilityResult feasibility(const ParameterMap& /*inputs*/) { return {}; }
  /// A violation message, or nullopt when execution may start.
  virtual std::optional<std::string> precondition(const ParameterMap& /*inputs*/) {
    return std::nullopt;
  }
};

/// Behavior assembled from callables; handy for tests and embedding.
class FunctionBehavior final : public SkillBehavior {
 public:
  using ExecuteFn = std::function<ExecutionStep(ExecutionContext&)>;
  using FeasibilityFn = std::function<FeasibilityResult(const ParameterMap&)>;
  using PreconditionFn = std::function<std::optional<std::string>(const ParameterMap&)>;

  explicit FunctionBehavior(ExecuteFn execute, FeasibilityFn feasibility = {},
                            PreconditionFn precondition = {})
      : execute_(std::move(execute)),
        feasibility_(std::move(feasibility)),
        precondition_(std::move(precondition)) {}

  ExecutionStep execute(ExecutionContext& context) override { return execute_(context); }
  FeasibilityResult feasibility(const ParameterMap& inputs) override {
    return feasibility_ ? feasibility_(inputs) : FeasibilityResult{};
  }
  std::optional<std::string> precondition(const ParameterMap& inputs) override {
    return precondition_ ? precondition_(inputs) : std::nullopt;
  }

 private:
  ExecuteFn execute_;
  FeasibilityFn feasibility_;
  PreconditionFn precondition_;
};

struct SkillEvent {
  std::string localRuntimeId;
  State previous = State::Stopped;
  State state = State::Stopped;
  std::uint64_t seq = 0;  ///< per instance, starts at 1
  std::int64_t timeMs = 0;
};

struct SkillSnapshot {
  std::string localRuntimeId;
  SkillDescriptor descriptor;
  State state = State::Stopped;
  ParameterMap inputValues;
  ParameterMap outputValues;
  std::optional<std::string> lastError;
  std::uint64_t eventSeq = 0;
};

/// Hosts skill instances and drives their state machines. All mutations of
/// one host are serialized; reads return consistent snapshots. Acting
/// states advance one step per tick, either on a background thread
/// (PumpMode::Background) or when the owner calls pump_once().
class SkillHost {
 public:
  enum class PumpMode { Background, Manual };
  using Listener = std::function<void(const SkillEvent&)>;

  SkillHost(std::string name, std::shared_ptr<Clock> clock, PumpMode mode = PumpMode::Background,
            std::chrono::milliseconds tick = std::chrono::milliseconds(100));
  ~SkillHost();

  SkillHost(const SkillHost&) = delete;
  SkillHost& operator=(const SkillHost&) = delete;

  const std::string& name() const noexcept { return name_; }
  std::chrono::milliseconds tick() const noexcept { return tick_; }
  const Clock& clock() const noexcept { return *clock_; }

  /// Returns the new LocalRuntimeID ("lr-0001", ...). Throws
  /// DescriptorInvalid or DuplicateSkillId.
  std::string register_skill(SkillDescriptor descriptor, std::unique_ptr<SkillBehavior> behavior);

  /// Throws UnknownSkill, InvalidTransition, PreconditionViolated.
  State fire_command(const std::string& localRuntimeId, Command command);

  /// Throws UnknownSkill, WrongState, UnknownParameter, NotWritable, TypeMismatch.
  void write_parameters(const std::string& localRuntimeId, const ParameterMap& values);

  SkillSnapshot read_skill(const std::string& localRuntimeId) const;
  std::vector<SkillSnapshot> list_skills() const;
  /// LocalRuntimeID for a skill id. Throws UnknownSkill.
  std::string runtime_id_of(const std::string& skillId) const;

  /// Side-effect free. Throws UnknownSkill, UnsupportedCheck, TypeMismatch.
  FeasibilityResult check_feasibility(const std::string& localRuntimeId, const ParameterMap& inputs);

  /// Listeners run while the host lock is held and must not call back into
  /// the host.
  std::uint64_t subscribe(const std::string& localRuntimeId, Listener listener);
  void unsubscribe(std::uint64_t subscriptionId);

  /// Advances time by one tick and moves every acting instance one step.
  /// Returns true while any instance is still acting.
  bool pump_once();
  /// Pumps until nothing is acting or `max_ticks` ticks elapsed.
  void run_until_quiescent(std::size_t max_ticks = 10000);

 private:
  struct Instance {
    std::string localRuntimeId;
    SkillDescriptor descriptor;
    std::unique_ptr<SkillBehavior> behavior;
    State state = State::Stopped;
    ParameterMap inputs;
    ParameterMap outputs;
    std::optional<std::string> lastError;
    std::uint64_t seq = 0;
    std::int64_t executeTicks = 0;
  };
  struct Subscription {
    std::string localRuntimeId;
    Listener listener;
  };

  Instance& instance(const std::string& localRuntimeId);
  const Instance& instance(const std::string& localRuntimeId) const;
  void transition(Instance& inst, State next);
  void step(Instance& inst);
  bool any_acting() const;
  ParameterMap checked_inputs(const Instance& inst, const ParameterMap& values) const;
  SkillSnapshot snapshot(const Instance& inst) const;
  void pump_loop();

  std::string name_;
  std::shared_ptr<Clock> clock_;
  PumpMode mode_;
  std::chrono::milliseconds tick_;

  mutable std::mutex mutex_;
  std::condition_variable wake_;
  std::map<std::string, Instance> instances_;
  std::map<std::string, std::string> by_skill_id_;
  std::map<std::uint64_t, Subscription> subscriptions_;
  std::uint64_t next_subscription_ = 1;
  std::uint64_t next_runtime_id_ = 1;
  bool stopping_ = false;
  std::thread pump_;
};

/// Behavior driven by a SimulationSpec: runs for a fixed number of ticks,
/// enforces parameter limits, copies inputs to outputs on completion.
std::unique_ptr<SkillBehavior> make_simulated_behavior(const SimulationSpec& spec,
                                                       const SkillDescriptor& descriptor,
                                                       std::chrono::milliseconds tick);

/// Registers every skill of `resource` on `host`, in document order, with its
/// SimulationSpec (or the default one). Returns the LocalRuntimeIDs.
std::vector<std::string> host_resource(SkillHost& host, const Resource& resource);

}  // namespace css
