#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "css/client.hpp"
#include "css/matcher.hpp"
#include "css/model.hpp"
#include "css/protocol.hpp"

namespace css {

/// One way to execute a step: a provider capability, the skill realizing it
/// and the bound skill inputs.
struct PlanChoice {
  std::string resourceId;
  std::string capabilityId;
  std::string skillId;
  MatchDegree matchDegree = MatchDegree::Disjoint;
  ParameterMap parameterAssignment;

  friend bool operator==(const PlanChoice&, const PlanChoice&) = default;
};

struct PlanEntry {
  std::string stepId;
  /// Qualifying choices in rank order; front() is the planned one and the
  /// rest are fallbacks for execution.
  std::vector<PlanChoice> choices;

  const PlanChoice& chosen() const { return choices.front(); }

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

struct ProductionPlan {
  std::string productId;
  std::vector<PlanEntry> entries;

  friend bool operator==(const ProductionPlan&, const ProductionPlan&) = default;
};

/// Throws NoMatchForStep naming the first step without a qualifying provider.
ProductionPlan plan(const Product& product, const WorldModel& world);

/// Maps step property values onto skill inputs (explicit mapping first, then
/// equal names), converting units; unbound inputs take their defaults.
/// Throws UnboundRequiredParameter, UnknownParameter, TypeMismatch, UnitMismatch.
ParameterMap bind_parameters(const ProcessStep& step, const Capability& capability,
                             const SkillDescriptor& skill, const WorldModel& world);

/// Skills of `resource` realizing `capability`, ordered by skillId.
std::vector<const SkillDescriptor*> skills_for(const Resource& resource, const Capability& capability);

json plan_entry_to_json(const PlanEntry& entry);
/// One result line per entry, correlationId = stepId.
std::string export_plan(const ProductionPlan& plan);

enum class RecordKind { StateChange, ParamWrite, Feasibility, OutputRead, Error };

std::string_view to_string(RecordKind kind);

struct TraceRecord {
  Timestamp timestamp;
  std::string stepId;
  std::string resourceId;
  std::string localRuntimeId;
  RecordKind kind = RecordKind::StateChange;
  json detail = json::object();

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ExecutionTrace {
  std::vector<TraceRecord> records;

  /// stateChange target states of one step, in order.
  std::vector<State> states_of(std::string_view stepId) const;
  /// Resource the step finally ran on, if it completed.
  std::optional<std::string> completed_on(std::string_view stepId) const;
};

/// One event line per record: kind "event", correlationId = stepId,
/// seq = 1-based record index.
std::string export_trace(const ExecutionTrace& trace);

struct ExecuteOptions {
  bool useFeasibility = true;
  /// Trace time origin; record times advance with the hosts' event clocks.
  Timestamp startTime;
  /// Longest wait for a single state change.
  std::chrono::milliseconds stateTimeout{10000};
};

struct ExecutionResult {
  ExecutionTrace trace;
  /// Step that exhausted its choices; later steps were not executed.
  std::optional<std::string> failedStep;

  bool ok() const { return !failedStep; }
};

/// Executes entries in order over the given clients, falling back to the next
/// ranked choice when a step is infeasible, its precondition fails or it
/// aborts. Throws InvalidArgument if a planned resource has no connection and
/// ConnectionLost/Timeout on transport failures.
ExecutionResult execute_plan(const ProductionPlan& plan,
                             const std::map<std::string, SkillClient*>& connections,
                             const ExecuteOptions& options = {});

}  // namespace css
