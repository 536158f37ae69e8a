#include <benchmark/benchmark.h>

#include "css/capability_lang.hpp"
#include "css/matcher.hpp"
#include "css/sample_world.hpp"

namespace {

void BM_ParseNormalize(benchmark::State& state) {
  const css::WorldModel world = css::sample_world();
  for (auto _ : state) {
    auto e = css::parse_expression("Drilling and (depth >= 10 mm) and (depth <= 2 cm) and (material != wood)", world);
    benchmark::DoNotOptimize(css::normalize(e, world));
  }
}
BENCHMARK(BM_ParseNormalize);

void BM_MatchDrilling(benchmark::State& state) {
  const css::WorldModel world = css::sample_world();
  auto required = css::parse_expression("Drilling and (depth >= 10 mm) and (depth <= 20 mm)", world);
  auto provided = css::parse_expression("Drilling and (depth <= 15 mm)", world);
  for (auto _ : state) benchmark::DoNotOptimize(css::match_capabilities(required, provided, world));
}
BENCHMARK(BM_MatchDrilling);

void BM_RankProviders(benchmark::State& state) {
  css::WorldModel world = css::sample_world();
  // Replicate the drilling resource to grow the candidate pool.
  const css::Resource base = world.resources.at(1);
  world.resources.pop_back();
  for (int i = 0; i < state.range(0); ++i) {
    css::Resource r = base;
    r.id = "r-" + std::to_string(100 + i);
    for (auto& c : r.providedCapabilities) c.id += "-" + std::to_string(i);
    world.resources.push_back(r);
  }
  auto required = css::parse_expression("Drilling and (depth >= 10 mm) and (depth <= 20 mm)", world);
  auto candidates = css::all_candidates(world);
  for (auto _ : state) benchmark::DoNotOptimize(css::rank_providers(required, candidates, world));
}
BENCHMARK(BM_RankProviders)->Arg(10)->Arg(100);

}  // namespace
