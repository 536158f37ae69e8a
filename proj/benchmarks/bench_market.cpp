#include <benchmark/benchmark.h>

#include <random>

#include "css/capability_lang.hpp"
#include "css/market.hpp"
#include "css/sample_world.hpp"

namespace {

struct Instance {
  css::WorldModel world = css::sample_world();
  css::ServiceRequest request;
  std::vector<css::ServiceOffer> offers;
  css::Timestamp now{1'790'000'000'000};
};

Instance make_instance(int keys, int offers) {
  Instance m;
  std::mt19937_64 rng(static_cast<std::uint64_t>(keys * 1000 + offers));
  auto expr = css::parse_expression("Drilling and (depth >= 10 mm) and (depth <= 12 mm)", m.world);
  m.request.requestId = "rq-bench";
  for (int k = 0; k < keys; ++k) m.request.requiredCapabilities.push_back({"k" + std::to_string(k), expr});
  m.request.tender.maxUnitPrice = css::Decimal::from_int(100);
  m.request.tender.maxCo2PerUnit = css::Decimal::from_int(10);
  m.request.tender.deliveryDeadline = css::Timestamp{m.now.millis + 86'400'000};
  for (int i = 0; i < offers; ++i) {
    css::ServiceOffer o;
    o.offerId = "o" + std::to_string(100 + i);
    o.requestId = m.request.requestId;
    for (int k = 0; k < keys; ++k) {
      // The first `keys` offers are singletons so a cover always exists.
      if (k == i % keys || (i >= keys && rng() % 3 == 0)) {
        o.coveredCapKeys.push_back("k" + std::to_string(k));
        o.providedCapabilities.emplace("k" + std::to_string(k), css::CapabilityExpression{"Drilling", {}});
      }
    }
    o.unitPrice = css::Decimal::from_int(static_cast<std::int64_t>(1 + rng() % 50));
    o.deliveryDate = m.now;
    o.validUntil = css::Timestamp{m.now.millis + 3'600'000};
    m.offers.push_back(o);
  }
  return m;
}

void BM_SelectOffers(benchmark::State& state) {
  Instance m = make_instance(6, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(css::select_offers(m.request, m.offers, m.now, m.world));
}
BENCHMARK(BM_SelectOffers)->Arg(10)->Arg(20)->Arg(60);

}  // namespace
