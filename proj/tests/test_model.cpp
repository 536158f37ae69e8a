#include <doctest.h>

#include "css/error.hpp"
#include "css/model.hpp"
#include "css/sample_world.hpp"

using namespace css;

namespace {

std::vector<Issue> errors_of(const WorldModel& w) {
  std::vector<Issue> out;
  for (const auto& issue : validate_model(w)) {
    if (issue.severity == Severity::Error) out.push_back(issue);
  }
  return out;
}

}  // namespace

TEST_CASE("well-formed world validates clean") {
  CHECK(validate_model(sample_world()).empty());
}

TEST_CASE("dangling capability reference") {
  WorldModel w = sample_world();
  w.resources[1].skills[0].capabilityRef = "cap-missing";
  auto errors = errors_of(w);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].message.find("cap-missing") != std::string::npos);
}

TEST_CASE("constraint unit disagrees with the property unit") {
  WorldModel w = sample_world();
  w.propertyDefs[0].unit = "s";
  auto errors = errors_of(w);
  REQUIRE_FALSE(errors.empty());
  bool unit_issue = false;
  for (const auto& e : errors) unit_issue = unit_issue || e.message.find("unit") != std::string::npos;
  CHECK(unit_issue);
}

TEST_CASE("report is ordered by path and deterministic") {
  WorldModel w = sample_world();
  w.resources[1].skills[0].capabilityRef = "x";
  w.resources[0].skills[0].capabilityRef = "y";
  w.resources[0].providedCapabilities[1].id = w.resources[0].providedCapabilities[0].id;
  auto report = validate_model(w);
  CHECK(report.size() >= 3);
  for (std::size_t i = 1; i < report.size(); ++i) CHECK(report[i - 1].path <= report[i].path);
  CHECK(report == validate_model(w));
}

TEST_CASE("descriptor defects") {
  SkillDescriptor d = sample_world().resources[0].skills[0];
  CHECK(descriptor_problems(d).empty());
  d.parameters.push_back(d.parameters[0]);
  CHECK_FALSE(descriptor_problems(d).empty());
  d = sample_world().resources[0].skills[0];
  d.parameters.push_back({"LocalRuntimeID", Direction::Input, Datatype::Integer, std::nullopt, std::nullopt, {}});
  CHECK_FALSE(descriptor_problems(d).empty());
  d = sample_world().resources[0].skills[0];
  d.stateMachineProfile = "ISA-88";
  CHECK_FALSE(descriptor_problems(d).empty());
  d = sample_world().resources[0].skills[0];
  d.capabilityRef.clear();
  CHECK_FALSE(descriptor_problems(d).empty());
}

TEST_CASE("capability resolution") {
  WorldModel w = sample_world();
  CHECK(resolve_capability(w, "urn:css:r-b:drilling").id == "cap-b-drill");
  try {
    resolve_capability(w, "urn:css:nowhere");
    FAIL("expected NotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
  w.resources[1].providedCapabilities[0].iri = "urn:css:r-a:drilling";
  CHECK_FALSE(errors_of(w).empty());
  CHECK(resolve_capability(w, "urn:css:r-a:drilling").id == "cap-a-drill");
}

TEST_CASE("clean world resolves every skill reference") {
  WorldModel w = sample_world();
  REQUIRE(validate_model(w).empty());
  for (const auto& r : w.resources) {
    for (const auto& s : r.skills) CHECK_NOTHROW(resolve_capability(w, s.capabilityRef));
  }
}
