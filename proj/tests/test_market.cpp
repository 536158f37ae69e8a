#include <doctest.h>

#include <algorithm>

#include "css/capability_lang.hpp"
#include "css/documents.hpp"
#include "css/error.hpp"
#include "css/market.hpp"
#include "css/sample_world.hpp"
#include "support/oracles.hpp"

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

struct Fixture {
  WorldModel world = sample_world();
  ServiceRequest request;
  std::vector<ServiceOffer> offers;
  Timestamp now = Timestamp::parse("2026-10-16T12:00:00Z");

  Fixture() {
    request = request_from_json(read_json_file(CSS_SAMPLES_DIR "/request.json"), world);
    offers = offers_from_json(read_json_file(CSS_SAMPLES_DIR "/offers.json"), world);
  }
  ServiceOffer& offer(const std::string& id) {
    return *std::find_if(offers.begin(), offers.end(), [&](const auto& o) { return o.offerId == id; });
  }
  std::vector<ServiceOffer> only(std::initializer_list<std::string> ids) {
    std::vector<ServiceOffer> out;
    for (const auto& id : ids) out.push_back(offer(id));
    return out;
  }
};

}  // namespace

TEST_CASE("offer admissibility") {
  Fixture f;
  CHECK(evaluate_offer(f.request, f.offer("A"), f.world) == Admissibility{true, {}});
  CHECK(evaluate_offer(f.request, f.offer("D"), f.world) == Admissibility{false, {"maxUnitPrice"}});

  ServiceOffer wide = f.offer("A");
  wide.providedCapabilities["cap1"] = parse_expression("Drilling and (depth <= 11 mm)", f.world);
  CHECK(evaluate_offer(f.request, wide, f.world) == Admissibility{false, {"capabilityCoverage"}});

  ServiceOffer bad = f.offer("A");
  bad.co2PerUnit = Decimal::parse("9");
  bad.deliveryDate = Timestamp::parse("2027-01-01T00:00:00Z");
  bad.certifications.clear();
  bad.ndaAccepted = false;
  bad.unitPrice = Decimal::parse("5.01");
  CHECK(evaluate_offer(f.request, bad, f.world).violations ==
        std::vector<std::string>{"maxUnitPrice", "maxCo2PerUnit", "deliveryDeadline", "certifications", "nda"});

  // Boundaries are inclusive.
  ServiceOffer edge = f.offer("A");
  edge.unitPrice = f.request.tender.maxUnitPrice;
  edge.deliveryDate = f.request.tender.deliveryDeadline;
  CHECK(evaluate_offer(f.request, edge, f.world).admissible);

  ServiceOffer stray = f.offer("A");
  stray.coveredCapKeys = {"cap9"};
  CHECK(code_of([&] { evaluate_offer(f.request, stray, f.world); }) == ErrorCode::UnknownCapKey);
  stray = f.offer("A");
  stray.requestId = "rq-other";
  CHECK(code_of([&] { evaluate_offer(f.request, stray, f.world); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("relaxing a tender bound never loses admissibility") {
  Fixture f;
  for (auto& o : f.offers) {
    bool before = evaluate_offer(f.request, o, f.world).admissible;
    for (int which = 0; which < 3; ++which) {
      ServiceRequest relaxed = f.request;
      if (which == 0) relaxed.tender.maxUnitPrice = relaxed.tender.maxUnitPrice + Decimal::from_int(1);
      if (which == 1) relaxed.tender.maxCo2PerUnit = relaxed.tender.maxCo2PerUnit + Decimal::from_int(1);
      if (which == 2) relaxed.tender.deliveryDeadline.millis += 86'400'000;
      if (before) CHECK(evaluate_offer(relaxed, o, f.world).admissible);
    }
  }
}

TEST_CASE("offer selection examples") {
  Fixture f;
  f.request.tender.maxUnitPrice = Decimal::parse("10");
  auto abc = f.only({"A", "B", "C"});

  Award best = select_offers(f.request, abc, f.now, f.world);
  CHECK(best.offer_ids() == std::vector<std::string>{"A", "B"});
  CHECK(best.totalCost == Decimal::parse("7.5"));
  CHECK(best.strategy == SelectionStrategy::Exact);
  CHECK(best.quantityAssumption == "full-quantity-per-offer");

  Award c = select_offers(f.request, f.only({"C"}), f.now, f.world);
  CHECK(c.offer_ids() == std::vector<std::string>{"C"});
  CHECK(c.totalCost == Decimal::parse("8"));

  // A expired; C is the only other cap1 cover and shares a group with B,
  // yet B is the only cap2 cover besides C, so C alone remains valid.
  auto expired = abc;
  expired[0].validUntil = Timestamp{f.now.millis - 1};
  CHECK(select_offers(f.request, expired, f.now, f.world).offer_ids() == std::vector<std::string>{"C"});
  // Without C's own cap2 coverage nothing covers both keys exactly once.
  expired[2].coveredCapKeys = {"cap1"};
  expired[2].providedCapabilities.erase("cap2");
  CHECK(code_of([&] { select_offers(f.request, expired, f.now, f.world); }) == ErrorCode::NoFeasibleCombination);

  // Quantity scales the total.
  f.request.tender.quantity = 3;
  CHECK(select_offers(f.request, abc, f.now, f.world).totalCost == Decimal::parse("22.5"));

  // validUntil == now is still valid.
  auto boundary = abc;
  for (auto& o : boundary) o.validUntil = f.now;
  CHECK(select_offers(f.request, boundary, f.now, f.world).offer_ids() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("equal costs resolve to the smaller id list") {
  Fixture f;
  auto offers = f.only({"A", "B"});
  ServiceOffer twin = f.offer("A");
  twin.offerId = "AA";
  offers.push_back(twin);
  CHECK(select_offers(f.request, offers, f.now, f.world).offer_ids() == std::vector<std::string>{"A", "B"});
  std::reverse(offers.begin(), offers.end());
  CHECK(select_offers(f.request, offers, f.now, f.world).offer_ids() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("contract formation") {
  Fixture f;
  Award award = select_offers(f.request, f.offers, f.now, f.world);
  Contract c = form_contract(award, f.now);
  CHECK(c.contractId == "ct-rq-100");
  CHECK(c.requestId == "rq-100");
  CHECK(c.acceptedOfferIds == std::vector<std::string>{"A", "B"});
  CHECK(c.totalPrice == award.totalCost);
  CHECK(c.formedAt == f.now);

  Timestamp last = award.selected.front().validUntil;
  CHECK(form_contract(award, last).formedAt == last);
  try {
    form_contract(award, Timestamp{last.millis + 1000});
    FAIL("expected OfferExpired");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OfferExpired);
    CHECK(std::string(e.what()).find("'A'") != std::string::npos);
  }
  Award empty;
  empty.requestId = "rq-100";
  CHECK(code_of([&] { form_contract(empty, f.now); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("marketplace registry") {
  Fixture f;
  Marketplace m(f.world);
  m.submit_request(f.request);
  CHECK(code_of([&] { m.submit_request(f.request); }) == ErrorCode::InvalidArgument);
  for (const auto& o : f.offers) m.submit_offer(o);
  CHECK(code_of([&] { m.submit_offer(f.offers[0]); }) == ErrorCode::InvalidArgument);
  ServiceOffer orphan = f.offers[0];
  orphan.offerId = "Z";
  orphan.requestId = "rq-404";
  CHECK(code_of([&] { m.submit_offer(orphan); }) == ErrorCode::NotFound);
  CHECK(m.offers_for("rq-100").size() == 4);
  CHECK(m.award("rq-100", f.now).totalCost == Decimal::parse("7.5"));
}

TEST_CASE("selection agrees with exhaustive enumeration") {
  testing::Rng rng(20261016);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto m = testing::random_market(rng, 10);
    auto expected = testing::exhaustive_min_cost(m);
    try {
      Award award = select_offers(m.request, m.offers, m.now, m.world);
      REQUIRE(expected);
      CHECK(award.totalCost == *expected);
      auto violation = testing::award_violation(m, award);
      CHECK_MESSAGE(!violation, *violation);
      ++feasible;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoFeasibleCombination);
      CHECK_FALSE(expected);
    }
  }
  CHECK(feasible > 50);
}

TEST_CASE("large candidate sets fall back to greedy") {
  testing::Rng rng(5);
  auto m = testing::random_market(rng, 1);
  m.request.tender.requiredCertifications.clear();
  m.request.tender.ndaRequired = false;
  ServiceOffer base = m.offers.at(0);
  base.providedCapabilities.clear();
  base.exclusiveGroup.reset();
  base.validUntil = Timestamp{m.now.millis + 1000};
  base.deliveryDate = m.now;
  base.co2PerUnit = Decimal::from_int(1);
  m.offers.clear();
  for (int i = 0; i < 25; ++i) {
    ServiceOffer o = base;
    o.offerId = "g" + std::to_string(100 + i);
    o.coveredCapKeys = {m.request.requiredCapabilities[i % m.request.requiredCapabilities.size()].capKey};
    o.providedCapabilities[o.coveredCapKeys[0]] = CapabilityExpression{"Drilling", {}};
    o.unitPrice = Decimal::from_int(1 + i % 4);
    m.offers.push_back(o);
  }
  Award award = select_offers(m.request, m.offers, m.now, m.world);
  CHECK(award.strategy != SelectionStrategy::Exact);
  CHECK_FALSE(testing::award_violation(m, award));
}
