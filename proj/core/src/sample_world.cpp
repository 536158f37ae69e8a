#include "css/sample_world.hpp"

#include "css/capability_lang.hpp"

namespace css {
namespace {

SkillDescriptor drill_skill(const std::string& resource) {
  SkillDescriptor d;
  d.skillId = resource == "r-a" ? "sk-a-drill" : "sk-b-drill";
  d.name = "Drill hole";
  d.capabilityRef = "urn:css:" + resource + ":drilling";
  d.parameters = {
      {"drillDepth", Direction::Input, Datatype::Real, "m", std::nullopt, {}},
      {"spindleSpeed", Direction::Input, Datatype::Integer, std::nullopt, Literal::integer(1200), {}},
      {"achievedDepth", Direction::Output, Datatype::Real, "m", std::nullopt, {}},
  };
  d.hasFeasibilityCheck = true;
  return d;
}

SimulationSpec drill_simulation() {
  SimulationSpec s;
  s.executeTicks = 3;
  s.limits = {{"drillDepth", Decimal(), Decimal::parse("0.015")}};
  s.outputs = {{"achievedDepth", "drillDepth"}};
  return s;
}

Capability drilling(const std::string& resource, const WorldModel& world) {
  return {resource == "r-a" ? "cap-a-drill" : "cap-b-drill", "urn:css:" + resource + ":drilling",
          parse_expression("Drilling and (depth <= 15 mm)", world), {{"depth", "drillDepth"}}};
}

}  // namespace

WorldModel sample_world() {
  WorldModel w;
  w.taxonomy = Taxonomy({
      {"Manufacturing", "", "Manufacturing"},
      {"Separating", "Manufacturing", "Separating"},
      {"Drilling", "Separating", "Drilling"},
      {"Milling", "Separating", "Milling"},
      {"Turning", "Separating", "Turning"},
      {"Joining", "Manufacturing", "Joining"},
      {"Screwing", "Joining", "Screwing"},
      {"Welding", "Joining", "Welding"},
  });
  w.propertyDefs = {
      {"depth", Datatype::Integer, "mm", {}, DeclaredRange{Decimal(), Decimal::from_int(100)}},
      {"diameter", Datatype::Real, "mm", {}, DeclaredRange{Decimal(), Decimal::from_int(50)}},
      {"material", Datatype::Enum, std::nullopt, {"aluminium", "steel", "wood"}, std::nullopt},
      {"coolant", Datatype::Boolean, std::nullopt, {}, std::nullopt},
      {"screwLength", Datatype::Integer, "mm", {}, DeclaredRange{Decimal(), Decimal::from_int(200)}},
  };

  Resource a;
  a.id = "r-a";
  a.providedCapabilities.push_back(drilling("r-a", w));
  a.providedCapabilities.push_back({"cap-a-screw", "urn:css:r-a:screwing",
                                    parse_expression("Screwing and (screwLength <= 40 mm)", w), {}});
  a.skills.push_back(drill_skill("r-a"));
  SkillDescriptor screw;
  screw.skillId = "sk-a-screw";
  screw.name = "Drive screw";
  screw.capabilityRef = "urn:css:r-a:screwing";
  screw.parameters = {
      {"screwLength", Direction::Input, Datatype::Integer, "mm", std::nullopt, {}},
      {"drivenLength", Direction::Output, Datatype::Integer, "mm", std::nullopt, {}},
  };
  screw.hasFeasibilityCheck = true;
  a.skills.push_back(screw);
  a.simulations.emplace("sk-a-drill", drill_simulation());
  SimulationSpec screw_sim;
  screw_sim.executeTicks = 2;
  screw_sim.limits = {{"screwLength", Decimal::from_int(1), Decimal::from_int(40)}};
  screw_sim.outputs = {{"drivenLength", "screwLength"}};
  a.simulations.emplace("sk-a-screw", screw_sim);

  Resource b;
  b.id = "r-b";
  b.providedCapabilities.push_back(drilling("r-b", w));
  b.skills.push_back(drill_skill("r-b"));
  b.simulations.emplace("sk-b-drill", drill_simulation());

  w.resources = {a, b};
  w.products = {sample_product(w)};
  return w;
}

Product sample_product(const WorldModel& world) {
  return {"p-bracket",
          {{"s1-drill", parse_expression("Drilling and (depth >= 10 mm) and (depth <= 20 mm)", world),
            {{"depth", Literal::integer(12)}}},
           {"s2-screw", parse_expression("Screwing and (screwLength <= 30 mm)", world),
            {{"screwLength", Literal::integer(25)}}}}};
}

}  // namespace css
