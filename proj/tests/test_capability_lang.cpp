#include <doctest.h>

#include <random>

#include "css/capability_lang.hpp"
#include "css/sample_world.hpp"

using namespace css;

namespace {

const WorldModel& world() {
  static const WorldModel w = sample_world();
  return w;
}

NormalForm nf(const char* text) { return normalize(parse_expression(text, world()), world()); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::NotFound;
}

}  // namespace

TEST_CASE("taxonomy subsumption") {
  const Taxonomy& t = world().taxonomy;
  CHECK(t.is_subclass_of("Drilling", "Separating"));
  CHECK(t.is_subclass_of("Drilling", "Drilling"));
  CHECK(t.is_subclass_of("Drilling", "Manufacturing"));
  CHECK_FALSE(t.is_subclass_of("Drilling", "Milling"));
  CHECK_FALSE(t.is_subclass_of("Separating", "Drilling"));
  CHECK(code_of([&] { t.is_subclass_of("Drilling", "Boring"); }) == ErrorCode::UnknownClass);
  CHECK(t.structural_problems().empty());
  CHECK(t.ancestors("Drilling") == std::vector<std::string>{"Separating", "Manufacturing"});
}

TEST_CASE("subclass relation is a partial order on the sample taxonomy") {
  const Taxonomy& t = world().taxonomy;
  for (const auto& a : t.classes()) {
    CHECK(t.is_subclass_of(a.id, a.id));
    for (const auto& b : t.classes()) {
      if (a.id != b.id && t.is_subclass_of(a.id, b.id)) CHECK_FALSE(t.is_subclass_of(b.id, a.id));
      for (const auto& c : t.classes()) {
        if (t.is_subclass_of(a.id, b.id) && t.is_subclass_of(b.id, c.id)) CHECK(t.is_subclass_of(a.id, c.id));
      }
    }
  }
}

TEST_CASE("taxonomy structural defects") {
  Taxonomy cyclic({{"A", "B", ""}, {"B", "A", ""}});
  CHECK_FALSE(cyclic.structural_problems().empty());
  Taxonomy two_roots({{"A", "", ""}, {"B", "", ""}});
  CHECK_FALSE(two_roots.structural_problems().empty());
  Taxonomy dangling({{"A", "", ""}, {"B", "Z", ""}});
  CHECK_FALSE(dangling.structural_problems().empty());
}

TEST_CASE("parsing the drilling expression") {
  auto e = parse_expression("Drilling and (depth <= 15 mm)", world());
  CHECK(e.classId == "Drilling");
  REQUIRE(e.constraints.size() == 1);
  CHECK(e.constraints[0].propertyId == "depth");
  CHECK(e.constraints[0].comparator == Comparator::LessEqual);
  CHECK(e.constraints[0].operands[0].value == Literal::integer(15));
  CHECK(e.constraints[0].operands[0].unit == std::optional<std::string>("mm"));

  CHECK(parse_expression("Drilling", world()).constraints.empty());
  CHECK(parse_expression("  Drilling   and(depth<=15mm)and (coolant = true)", world()).constraints.size() == 2);
  auto in = parse_expression("Drilling and (material in {steel, \"wood\"})", world());
  CHECK(in.constraints[0].operands.size() == 2);
  CHECK(parse_expression("Drilling and (material in {})", world()).constraints[0].operands.empty());
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_expression("Drilling and (depth <= fast)", world()); }) == ErrorCode::TypeMismatch);
  CHECK(code_of([] { parse_expression("Boring", world()); }) == ErrorCode::UnknownClass);
  CHECK(code_of([] { parse_expression("Drilling and (width < 3)", world()); }) == ErrorCode::UnknownProperty);
  CHECK(code_of([] { parse_expression("Drilling and (depth <= 15 s)", world()); }) == ErrorCode::UnitMismatch);
  CHECK(code_of([] { parse_expression("Drilling and (depth <= 15 furlong)", world()); }) == ErrorCode::UnknownUnit);
  CHECK(code_of([] { parse_expression("Drilling and (material < steel)", world()); }) == ErrorCode::TypeMismatch);
  CHECK(code_of([] { parse_expression("Drilling and (material = copper)", world()); }) == ErrorCode::TypeMismatch);

  try {
    parse_expression("Drilling and depth <= 15", world());
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 13);
    CHECK(std::find(e.expected().begin(), e.expected().end(), "'('") != e.expected().end());
  }
  CHECK(code_of([] { parse_expression("Drilling or (depth < 3)", world()); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_expression("Drilling and (depth <= )", world()); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_expression("", world()); }) == ErrorCode::SyntaxError);
}

TEST_CASE("expression text round-trips") {
  for (const char* text : {"Drilling and (depth <= 15 mm)", "Drilling and (depth >= 1.5 cm) and (depth != 17)",
                           "Drilling and (material in {steel, wood}) and (coolant = false)",
                           "Separating and (diameter < 2.25 mm) and (diameter > 0.5)", "Screwing"}) {
    auto e = parse_expression(text, world());
    CHECK(parse_expression(to_string(e), world()) == e);
  }
}

TEST_CASE("normalization") {
  CHECK(to_string(nf("Drilling and (depth <= 15 mm) and (depth >= 10 mm)")) == "Drilling where depth in [10, 15]");
  CHECK(nf("Drilling and (depth <= 15 mm) and (depth >= 20 mm)").feasible.at("depth").is_empty());
  auto lt = nf("Drilling and (depth < 15 mm)").feasible.at("depth");
  CHECK(lt.upper().value == Decimal::from_int(14));
  CHECK_FALSE(lt.upper().open);
  // 1.5 cm = 15 mm, values land in the property's unit.
  CHECK(nf("Drilling and (depth <= 1.5 cm)") == nf("Drilling and (depth <= 15 mm)"));
  // Fractional bounds on integer properties tighten inward.
  CHECK(nf("Drilling and (depth > 9.5) and (depth < 15.5)") == nf("Drilling and (depth >= 10) and (depth <= 15)"));
  // Excluding an endpoint tightens the integer interval.
  CHECK(nf("Drilling and (depth >= 10) and (depth <= 15) and (depth != 15)") ==
        nf("Drilling and (depth >= 10) and (depth <= 14)"));
  // Real intervals open instead.
  auto real = nf("Drilling and (diameter <= 5) and (diameter != 5)").feasible.at("diameter");
  CHECK(real.upper().open);
  CHECK(nf("Drilling and (coolant = true)").feasible.at("coolant").symbol_values() == std::set<std::string>{"true"});
  CHECK(nf("Drilling and (material != steel)").feasible.at("material").symbol_values() ==
        std::set<std::string>{"aluminium", "wood"});
}

TEST_CASE("normalization is idempotent under re-encoding") {
  for (const char* text :
       {"Drilling and (depth <= 15 mm) and (depth >= 10 mm) and (depth != 12)", "Drilling and (depth in {3, 5, 7})",
        "Drilling and (diameter > 1.5) and (diameter != 3)", "Drilling and (material in {steel})",
        "Drilling and (depth < 3) and (depth > 8)", "Drilling and (coolant != true)", "Milling"}) {
    NormalForm first = nf(text);
    NormalForm again = normalize(to_expression(first, world()), world());
    CHECK_MESSAGE(again == first, text);
  }
}

// Enumeration oracle: the integers satisfying the raw atoms must be exactly
// the members of the normalized set.
TEST_CASE("normal form denotes the same integer set as the raw atoms") {
  std::mt19937_64 rng(7);
  const char* ops[] = {"<", "<=", ">", ">=", "=", "!="};
  auto raw_holds = [](int op, int v2, int operand2) {
    switch (op) {
      case 0: return v2 < operand2;
      case 1: return v2 <= operand2;
      case 2: return v2 > operand2;
      case 3: return v2 >= operand2;
      case 4: return v2 == operand2;
      default: return v2 != operand2;
    }
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = "Drilling";
    std::vector<std::pair<int, int>> atoms;
    int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < n; ++i) {
      int op = std::uniform_int_distribution<int>(0, 5)(rng);
      int half = std::uniform_int_distribution<int>(-10, 230)(rng);  // operand*2
      atoms.emplace_back(op, half);
      std::string lit = std::to_string(half / 2) + (half % 2 ? ".5" : "");
      if (half < 0 && half % 2) lit = "-" + std::to_string(-half / 2) + ".5";
      text += std::string(" and (depth ") + ops[op] + " " + lit + ")";
    }
    FeasibleSet set = FeasibleSet::full_numeric(true);
    NormalForm form = nf(text.c_str());
    if (auto it = form.feasible.find("depth"); it != form.feasible.end()) set = it->second;
    for (int v = -10; v <= 130; ++v) {
      bool raw = true;
      for (auto [op, half] : atoms) raw = raw && raw_holds(op, 2 * v, half);
      CHECK_MESSAGE(raw == set.contains(Decimal::from_int(v)), text << " at " << v);
    }
  }
}
