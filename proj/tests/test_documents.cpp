#include <doctest.h>

#include <filesystem>

#include "css/documents.hpp"
#include "css/error.hpp"
#include "css/model.hpp"
#include "css/sample_world.hpp"

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

const std::filesystem::path kSamples = CSS_SAMPLES_DIR;

}  // namespace

TEST_CASE("sample files load to the built-in world") {
  WorldModel loaded = load_world(kSamples / "world.json");
  WorldModel builtin = sample_world();
  CHECK(loaded.products.empty());
  builtin.products.clear();
  CHECK(loaded == builtin);
  Product p = product_from_json(read_json_file(kSamples / "product.json"), loaded);
  CHECK(p == sample_product(loaded));
}

TEST_CASE("world round trip") {
  WorldModel w = sample_world();
  json doc = world_to_json(w);
  CHECK(schema_of(doc) == "css.world/1");
  CHECK(world_from_json(doc) == w);
  CHECK(world_to_json(world_from_json(doc)) == doc);
}

TEST_CASE("commercial documents round trip") {
  WorldModel w = sample_world();
  ServiceRequest rq = request_from_json(read_json_file(kSamples / "request.json"), w);
  CHECK(request_from_json(request_to_json(rq), w) == rq);
  auto offers = offers_from_json(read_json_file(kSamples / "offers.json"), w);
  CHECK(offers.size() == 4);
  CHECK(offers[1].exclusiveGroup == "g-b");
  CHECK(offers_from_json(offers_to_json(offers), w) == offers);
  CHECK(product_from_json(product_to_json(sample_product(w)), w) == sample_product(w));
}

TEST_CASE("endpoints document") {
  auto eps = endpoints_from_json(read_json_file(kSamples / "endpoints.json"));
  CHECK(eps.at("r-b").port == 7102);
  CHECK(endpoints_from_json(endpoints_to_json(eps)).at("r-a").to_string() == "127.0.0.1:7101");
}

TEST_CASE("strict reading") {
  WorldModel w = sample_world();
  json doc = world_to_json(w);
  doc["colour"] = "blue";
  CHECK(code_of([&] { world_from_json(doc); }) == ErrorCode::SchemaError);
  doc = world_to_json(w);
  doc["schema"] = "css.world/7";
  CHECK(code_of([&] { world_from_json(doc); }) == ErrorCode::SchemaError);
  doc = world_to_json(w);
  doc["resources"][0]["skills"][0]["parameters"][0]["direction"] = "sideways";
  CHECK(code_of([&] { world_from_json(doc); }) == ErrorCode::SchemaError);
  doc = world_to_json(w);
  doc["resources"][0]["skills"][0]["bogus"] = 1;
  try {
    world_from_json(doc);
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  CHECK(code_of([] { read_json_file("/nonexistent/world.json"); }) == ErrorCode::IoError);
}

TEST_CASE("broken sample world reports the dangling reference") {
  WorldModel w = load_world(kSamples / "broken-world.json");
  auto report = validate_model(w);
  REQUIRE(report.size() == 1);
  CHECK(report[0].message.find("urn:css:r-b:boring") != std::string::npos);
}
