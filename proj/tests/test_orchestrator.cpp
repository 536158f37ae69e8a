#include <doctest.h>

#include "css/capability_lang.hpp"
#include "css/error.hpp"
#include "css/orchestrator.hpp"
#include "css/sample_world.hpp"
#include "css/state_machine.hpp"
#include "support/cluster.hpp"

using namespace css;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::NotFound;
}

Resource& resource(WorldModel& w, const std::string& id) {
  for (auto& r : w.resources) {
    if (r.id == id) return r;
  }
  throw std::out_of_range(id);
}

const std::vector<State> kSuccess = {State::Resetting, State::Idle,     State::Starting,  State::Execute,
                                     State::Completing, State::Complete, State::Resetting, State::Idle};

ExecutionResult run(const WorldModel& world) {
  testing::Cluster cluster(world, testing::Cluster::Transport::InProcess);
  ExecuteOptions options;
  options.startTime = Timestamp::parse("2026-01-01T00:00:00Z");
  options.stateTimeout = std::chrono::milliseconds(3000);
  return execute_plan(plan(world.products.at(0), world), cluster.connections(), options);
}

}  // namespace

TEST_CASE("planning examples") {
  WorldModel w = sample_world();
  ProductionPlan p = plan(w.products[0], w);
  REQUIRE(p.entries.size() == 2);
  CHECK(p.productId == "p-bracket");
  const PlanEntry& drill = p.entries[0];
  CHECK(drill.stepId == "s1-drill");
  CHECK(drill.chosen().resourceId == "r-a");
  CHECK(drill.chosen().capabilityId == "cap-a-drill");
  CHECK(drill.chosen().skillId == "sk-a-drill");
  CHECK(drill.chosen().matchDegree == MatchDegree::Intersect);
  REQUIRE(drill.choices.size() == 2);
  CHECK(drill.choices[1].resourceId == "r-b");
  CHECK(p.entries[1].chosen().resourceId == "r-a");
  CHECK(p.entries[1].chosen().matchDegree == MatchDegree::Plugin);

  // Plan soundness: step values satisfy both expressions.
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const ProcessStep& step = w.products[0].steps[i];
    CHECK(evaluate_atoms(step.requiredCapability, step.parameterValues, w));
    for (const auto& choice : p.entries[i].choices) {
      const Resource* r = w.find_resource(choice.resourceId);
      for (const auto& cap : r->providedCapabilities) {
        if (cap.id == choice.capabilityId) CHECK(evaluate_atoms(cap.expression, step.parameterValues, w));
      }
    }
  }

  w.products[0].steps[0].parameterValues.insert_or_assign("depth", Literal::integer(18));
  try {
    plan(w.products[0], w);
    FAIL("expected NoMatchForStep");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoMatchForStep);
    CHECK(std::string(e.what()).find("s1-drill") != std::string::npos);
  }
  CHECK(export_plan(plan(sample_product(sample_world()), sample_world())) ==
        export_plan(plan(sample_product(sample_world()), sample_world())));
}

TEST_CASE("parameter binding") {
  WorldModel w = sample_world();
  const Resource& a = *w.find_resource("r-a");
  const ProcessStep& drill = w.products[0].steps[0];
  ParameterMap bound = bind_parameters(drill, a.providedCapabilities[0], a.skills[0], w);
  CHECK(bound.at("drillDepth") == Literal::real(Decimal::parse("0.012")));
  CHECK(bound.at("spindleSpeed") == Literal::integer(1200));
  CHECK_FALSE(bound.count("achievedDepth"));

  const ProcessStep& screw = w.products[0].steps[1];
  CHECK(bind_parameters(screw, a.providedCapabilities[1], a.skills[1], w).at("screwLength") == Literal::integer(25));

  SkillDescriptor needy = a.skills[0];
  needy.parameters.push_back({"feedRate", Direction::Input, Datatype::Real, std::nullopt, std::nullopt, {}});
  CHECK(code_of([&] { bind_parameters(drill, a.providedCapabilities[0], needy, w); }) ==
        ErrorCode::UnboundRequiredParameter);

  CHECK(skills_for(a, a.providedCapabilities[0]).size() == 1);
}

TEST_CASE("execution of the sample product") {
  ExecutionResult r = run(sample_world());
  REQUIRE(r.ok());
  CHECK(r.trace.states_of("s1-drill") == kSuccess);
  CHECK(r.trace.states_of("s2-screw") == kSuccess);
  CHECK(r.trace.completed_on("s1-drill") == "r-a");
  CHECK(r.trace.completed_on("s2-screw") == "r-a");

  // Timestamps never decrease and every step's state path is legal.
  for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
    CHECK(r.trace.records[i - 1].timestamp <= r.trace.records[i].timestamp);
  }
  for (const auto& step : {"s1-drill", "s2-screw"}) {
    auto states = r.trace.states_of(step);
    for (std::size_t i = 1; i < states.size(); ++i) {
      bool legal = false;
      for (Command c : kAllCommands) legal = legal || next_state(states[i - 1], c) == states[i];
      legal = legal || completion_target(states[i - 1]) == states[i];
      CHECK(legal);
    }
  }
  bool read_output = false;
  for (const auto& rec : r.trace.records) {
    if (rec.kind == RecordKind::OutputRead && rec.stepId == "s1-drill") {
      CHECK(rec.detail.at("values").at("achievedDepth") == "0.012");
      read_output = true;
    }
  }
  CHECK(read_output);
  CHECK(export_trace(r.trace) == export_trace(run(sample_world()).trace));
}

TEST_CASE("infeasible first choice falls back to the next provider") {
  WorldModel w = sample_world();
  resource(w, "r-a").simulations["sk-a-drill"].forceInfeasible = true;
  ExecutionResult r = run(w);
  REQUIRE(r.ok());
  CHECK(r.trace.completed_on("s1-drill") == "r-b");
  CHECK(r.trace.states_of("s1-drill") == kSuccess);
  const TraceRecord* first = nullptr;
  for (const auto& rec : r.trace.records) {
    if (rec.stepId == "s1-drill") {
      first = &rec;
      break;
    }
  }
  REQUIRE(first);
  CHECK(first->kind == RecordKind::Feasibility);
  CHECK(first->resourceId == "r-a");
  CHECK(first->detail.at("feasible") == false);
}

TEST_CASE("abort without an alternative halts the run") {
  WorldModel w = sample_world();
  w.resources.erase(w.resources.begin() + 1);
  resource(w, "r-a").simulations["sk-a-drill"].failDuringExecute = "spindle stall";
  ExecutionResult r = run(w);
  CHECK(r.failedStep == "s1-drill");
  CHECK_FALSE(r.trace.completed_on("s1-drill"));
  CHECK(r.trace.states_of("s1-drill").back() == State::Aborted);
  for (const auto& rec : r.trace.records) CHECK(rec.stepId != "s2-screw");
  const TraceRecord& last = r.trace.records.back();
  CHECK(last.kind == RecordKind::Error);
  CHECK(last.detail.at("code") == "StepFailedNoAlternative");
}

TEST_CASE("precondition failure falls back") {
  WorldModel w = sample_world();
  resource(w, "r-a").simulations["sk-a-drill"].preconditionViolation = "no tool loaded";
  resource(w, "r-a").skills[0].hasPreconditionCheck = true;
  ExecutionResult r = run(w);
  REQUIRE(r.ok());
  CHECK(r.trace.completed_on("s1-drill") == "r-b");
}

TEST_CASE("missing connection") {
  WorldModel w = sample_world();
  ProductionPlan p = plan(w.products[0], w);
  CHECK(code_of([&] { execute_plan(p, {}); }) == ErrorCode::InvalidArgument);
}
